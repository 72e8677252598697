#pragma once

#include <stdexcept>
#include <string>

namespace anticyc {

// Every failure carries a stable machine-readable code alongside the human
// message; the CLI maps codes to exit status 2 diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define ANTICYC_ERROR_KIND(Name)                                    \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

ANTICYC_ERROR_KIND(InputError);
ANTICYC_ERROR_KIND(PreconditionFailed);
ANTICYC_ERROR_KIND(ResourceLimit);
ANTICYC_ERROR_KIND(NoRoot);
ANTICYC_ERROR_KIND(NotPrincipal);
ANTICYC_ERROR_KIND(NotPrincipalField);
ANTICYC_ERROR_KIND(NotCoprime);
ANTICYC_ERROR_KIND(UnitIncompatible);
ANTICYC_ERROR_KIND(NotOrdinary);
ANTICYC_ERROR_KIND(PoleError);
ANTICYC_ERROR_KIND(SelfDualityViolated);

#undef ANTICYC_ERROR_KIND

}  // namespace anticyc
