#include "toric/numeric.hpp"

namespace toric {

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw ToricError("rational with zero denominator: " + s);
    return Rat(num, den);
}

std::string rat_to_string(const Rat& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

Int binomial(const Int& n, long k) {
    if (k < 0 || n < 0 || n < k) return 0;
    Int result = 1;
    for (long i = 0; i < k; ++i) {
        result *= (n - i);
        result /= (i + 1);
    }
    return result;
}

}  // namespace toric
