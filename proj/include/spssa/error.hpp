#pragma once

#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace spssa {

/// Base of every error thrown by the library. `kind()` is a short
/// machine-readable tag used by the CLI error record.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Invalid user-supplied parameters. `key()` names the offending setting.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error("config", what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Structural violation of an operation's domain (empty sets, shapes, ranks).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Covariance too close to singular to whiten.
class SingularityError : public Error {
public:
    SingularityError(double eigenvalue, const std::string& what)
        : Error("singular", what), eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

/// Numerical failure (factorization did not succeed, etc.).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline WarningSink& warning_sink() {
    static WarningSink sink = [](const std::string& msg) {
        std::fprintf(stderr, "warning: %s\n", msg.c_str());
    };
    return sink;
}
}  // namespace detail

/// Replaces the process-wide warning sink and returns the previous one.
/// Not synchronized; install sinks before starting concurrent work.
inline WarningSink set_warning_sink(WarningSink sink) {
    auto previous = std::move(detail::warning_sink());
    detail::warning_sink() = std::move(sink);
    return previous;
}

inline void warn(const std::string& msg) {
    if (auto& sink = detail::warning_sink())
        sink(msg);
}

/// Scoped redirection of warnings; restores the previous sink on exit.
class ScopedWarningSink {
public:
    explicit ScopedWarningSink(WarningSink sink) : previous_(set_warning_sink(std::move(sink))) {}
    ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
    ScopedWarningSink(const ScopedWarningSink&) = delete;
    ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

private:
    WarningSink previous_;
};

}  // namespace spssa
