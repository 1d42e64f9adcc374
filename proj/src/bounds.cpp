#include "toric/bounds.hpp"

namespace toric {

void require_admissible_eps(long n, long a, const Rat& eps) {
    if (n < 2 || a < 1) throw BadParamsError("require_admissible_eps: need n >= 2, a >= 1");
    if (eps < Rat(2 * a, n) || eps >= Rat(1, 4))
        throw EpsilonOutOfRangeError("epsilon must satisfy 2a/n <= eps < 1/4");
}

Rat evaluate_E(long n, long k, long a, const Rat& eps) {
    if (k < 2) throw BadParamsError("evaluate_E: need k >= 2");
    require_admissible_eps(n, a, eps);
    Int cna = ceil_div(Int(n), Int(a));
    Rat N(n), K(k), A(a), C(cna);
    Rat t_bound = (C + 2) * (K + eps * N) / (eps * N * (N + C + K + 2));
    Rat first = (Rat(1, 4) - eps) * N * N + (A + Rat(5, 2)) * N + A * A + 3 * A + 2;
    Rat second = (Rat(3, 4) + eps) * N * N + (Rat(3, 2) * A + 2) * N - A * A + A + 1;
    return t_bound * first + (N + C + K + 2) * second;
}

BoundReport bound_components(long n, long k, long a, const Rat& eps, const Rat& c) {
    if (k < 2) throw BadParamsError("bound_components: need k >= 2");
    require_admissible_eps(n, a, eps);
    Int cna = ceil_div(Int(n), Int(a));
    BoundReport r;
    r.params = {n, k, a};
    r.eps = eps;
    r.c = c;
    r.amplitude_bound = Int(n) + Int(k) + cna + 1;
    Rat N(n), K(k), A(a), C(cna);
    r.t_eps_bound = (C + 2) * (K + eps * N) / (eps * N * (N + K + C + 2));
    r.z_fixed_bound = Int(n + 2 * a + 1) * Int(n + 3);
    r.z_fixed_strong_bound =
        (Rat(3, 4) + eps) * N * N + (Rat(3, 2) + eps + A + 2 * eps * A) * N - A * A + A + 1;
    r.e_value = evaluate_E(n, k, a, eps);
    r.rk_k0 = rank_k0_closed_form({n, k, a});
    r.margin = c * Rat(r.rk_k0) - r.e_value;
    return r;
}

std::optional<long> counterexample_threshold(long n, long a, const Rat& eps, const Rat& c,
                                             long k_max) {
    require_admissible_eps(n, a, eps);
    for (long k = 2; k <= k_max; ++k) {
        Rat margin = c * Rat(rank_k0_closed_form({n, k, a})) - evaluate_E(n, k, a, eps);
        if (margin > 0) return k;
    }
    return std::nullopt;
}

Rat leading_coefficient_P2(long n, long a, const Rat& eps, const Rat& c) {
    if (n < 1 || a < 1) throw BadParamsError("leading_coefficient_P2: need n, a >= 1");
    Rat N(n), A(a);
    return eps * N *
           ((c - Rat(3, 4) - eps) * N * N + (2 * A * c + c - Rat(3, 2) * A - 2) * N + 2 * A * c +
            c + A * A - A - 1);
}

}  // namespace toric
