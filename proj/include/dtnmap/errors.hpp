#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace dtn {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define DTN_DECLARE_ERROR(Name)                                            \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(what) {}            \
        const char* kind() const noexcept override { return #Name; }       \
    };

DTN_DECLARE_ERROR(ConstraintViolation)
DTN_DECLARE_ERROR(OutOfDomain)
DTN_DECLARE_ERROR(DegenerateScale)
DTN_DECLARE_ERROR(NoConvergence)
DTN_DECLARE_ERROR(BadDecayCertificate)
DTN_DECLARE_ERROR(GridError)
DTN_DECLARE_ERROR(SingularStep)
DTN_DECLARE_ERROR(DomainError)
DTN_DECLARE_ERROR(ConfigError)

#undef DTN_DECLARE_ERROR

template <class... Args>
std::string format_message(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

}  // namespace dtn
