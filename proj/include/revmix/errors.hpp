#pragma once

#include <stdexcept>
#include <string>

namespace revmix {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define REVMIX_DEFINE_ERROR(Name)                               \
    struct Name : Error {                                       \
        explicit Name(const std::string& what) : Error(what) {} \
    }

REVMIX_DEFINE_ERROR(InvalidParams);
REVMIX_DEFINE_ERROR(StateSpaceTooLarge);
REVMIX_DEFINE_ERROR(DegenerateMarginal);
REVMIX_DEFINE_ERROR(NoReturn);
REVMIX_DEFINE_ERROR(ForbiddenTransition);
REVMIX_DEFINE_ERROR(PathTooShort);
REVMIX_DEFINE_ERROR(RateOutOfRange);
REVMIX_DEFINE_ERROR(DegenerateEnvelope);
REVMIX_DEFINE_ERROR(HorizonTooSmall);
REVMIX_DEFINE_ERROR(NumericalUnderflow);
REVMIX_DEFINE_ERROR(ValidationFailure);
REVMIX_DEFINE_ERROR(ScaleRatioViolation);
REVMIX_DEFINE_ERROR(BudgetTooSmall);
REVMIX_DEFINE_ERROR(BoundViolation);

#undef REVMIX_DEFINE_ERROR

}  // namespace revmix
