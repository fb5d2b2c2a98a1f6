#pragma once

#include <stdexcept>
#include <string>

namespace heckelab {

// Domain errors carry a stable name so the CLI can report them uniformly.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define HECKELAB_DEFINE_ERROR(NAME)                                  \
    class NAME : public DomainError {                                 \
    public:                                                           \
        explicit NAME(const std::string& what)                        \
            : DomainError(#NAME, what) {}                             \
    }

HECKELAB_DEFINE_ERROR(MismatchedPrime);
HECKELAB_DEFINE_ERROR(DivisionByZero);
HECKELAB_DEFINE_ERROR(PrecisionExhausted);
HECKELAB_DEFINE_ERROR(ZeroInput);
HECKELAB_DEFINE_ERROR(NotPrime);
HECKELAB_DEFINE_ERROR(SingularMatrix);
HECKELAB_DEFINE_ERROR(RegionOutsideDomain);
HECKELAB_DEFINE_ERROR(InvalidWord);
HECKELAB_DEFINE_ERROR(DepthExceedsPrecision);

#undef HECKELAB_DEFINE_ERROR

} // namespace heckelab
