#pragma once

#include <stdexcept>
#include <string>

namespace cpr {

// Every domain failure raised by the library derives from Error.  kind()
// returns the short error name, which the CLI copies into its diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CPR_DEFINE_ERROR(Name)                                                \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

CPR_DEFINE_ERROR(DimensionMismatch);
CPR_DEFINE_ERROR(InfiniteMultiplicity);
CPR_DEFINE_ERROR(NotAutomorphism);
CPR_DEFINE_ERROR(LevelMismatch);
CPR_DEFINE_ERROR(SideMismatch);
CPR_DEFINE_ERROR(FsViolation);
CPR_DEFINE_ERROR(SystemMismatch);
CPR_DEFINE_ERROR(InvalidRepresentation);
CPR_DEFINE_ERROR(CapExceeded);
CPR_DEFINE_ERROR(ContextMismatch);
CPR_DEFINE_ERROR(ZeroScalar);
CPR_DEFINE_ERROR(NotTwoSided);
CPR_DEFINE_ERROR(NotInvariant);
CPR_DEFINE_ERROR(HypothesisViolated);
CPR_DEFINE_ERROR(InvalidIdeal);
CPR_DEFINE_ERROR(InfiniteGraph);
CPR_DEFINE_ERROR(SyntaxError);
CPR_DEFINE_ERROR(UnknownGenerator);
CPR_DEFINE_ERROR(PathError);
CPR_DEFINE_ERROR(FormatError);

#undef CPR_DEFINE_ERROR

} // namespace cpr
