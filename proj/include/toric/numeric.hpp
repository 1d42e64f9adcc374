#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

// All arithmetic in this library is exact. Int is an arbitrary-precision
// integer, Rat an always-normalized rational (gcd-reduced, positive
// denominator), so equality tests are canonical.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// floor(a/b) for integers, b != 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// ceil(a/b) for integers, b != 0.
inline Int ceil_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) == (b < 0))) ++q;
    return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }
inline Int ceil_rat(const Rat& r) { return ceil_div(rat_num(r), rat_den(r)); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

inline int sign_of(const Int& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }
inline int sign_of(const Rat& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

// "p/q" (or plain "p") parsing; used everywhere rationals cross a text
// boundary so no floats ever appear in I/O.
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

Int binomial(const Int& n, long k);

// Common error vocabulary shared by the modules.
struct ToricError : std::runtime_error {
    explicit ToricError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSpanningError : ToricError { using ToricError::ToricError; };
struct NotFanoError : ToricError { using ToricError::ToricError; };
struct NotPicardThreeError : ToricError { using ToricError::ToricError; };
struct NotProjectiveError : ToricError { using ToricError::ToricError; };
struct PrecondViolatedError : ToricError { using ToricError::ToricError; };
struct DimensionTooLargeError : ToricError { using ToricError::ToricError; };
struct UnboundedPolyhedronError : ToricError { using ToricError::ToricError; };
struct EpsilonOutOfRangeError : ToricError { using ToricError::ToricError; };
struct BadParamsError : ToricError { using ToricError::ToricError; };
struct ConstructionShortfallError : ToricError { using ToricError::ToricError; };
struct EnumerationUnboundedError : ToricError { using ToricError::ToricError; };
struct InternalError : ToricError { using ToricError::ToricError; };

}  // namespace toric
