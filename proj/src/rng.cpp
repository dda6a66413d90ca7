#include "l2infer/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace l2 {

namespace {

struct Words4 {
    std::uint32_t v[4];
};

inline void philox_round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2,
                         std::uint32_t& c3, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
}

Words4 philox4x32_10(std::uint64_t key, std::uint64_t hi, std::uint64_t lo) {
    std::uint32_t c0 = static_cast<std::uint32_t>(lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(c0, c1, c2, c3, k0, k1);
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return Words4{{c0, c1, c2, c3}};
}

}  // namespace

double u01_at(std::uint64_t key, std::uint64_t hi, std::uint64_t lo) {
    const Words4 w = philox4x32_10(key, hi, lo);
    // 53 random bits, offset by 1/2 ulp so the result lies strictly in (0,1).
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(w.v[0]) << 21) ^ (static_cast<std::uint64_t>(w.v[1]) >> 11) ^
        (static_cast<std::uint64_t>(w.v[2]) << 42);
    const std::uint64_t k = bits & ((std::uint64_t{1} << 53) - 1);
    return (static_cast<double>(k) + 0.5) * 0x1p-53;
}

double normal_at(std::uint64_t key, std::uint64_t hi, std::uint64_t lo) {
    return normal_icdf(u01_at(key, hi, lo));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// AS 241 algorithm PPND16: maximum relative error about 1e-15 over (0,1).
double normal_icdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_icdf: p must be in (0,1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                                 6.7265770927008700853e4) *
                                    r +
                                4.5921953931549871457e4) *
                                   r +
                               1.3731693765509461125e4) *
                                  r +
                              1.9715909503065514427e3) *
                                 r +
                             1.3314166789178437745e2) *
                                r +
                            3.3871328727963666080e0);
        const double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                                 3.9307895800092710610e4) *
                                    r +
                                2.1213794301586595867e4) *
                                   r +
                               5.3941960214247511077e3) *
                                  r +
                              6.8718700749205790830e2) *
                                 r +
                             4.2313330701600911252e1) *
                                r +
                            1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) *
                                    r +
                                1.27045825245236838258e0) *
                                   r +
                               3.64784832476320460504e0) *
                                  r +
                              5.76949722146069140550e0) *
                                 r +
                             4.63033784615654529590e0) *
                                r +
                            1.42343711074968357734e0);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) *
                                    r +
                                1.48103976427480074590e-1) *
                                   r +
                               6.89767334985100004550e-1) *
                                  r +
                              1.67638483018380384940e0) *
                                 r +
                             2.05319162663775882187e0) *
                                r +
                            1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) *
                                    r +
                                2.65321895265761230930e-2) *
                                   r +
                               2.96560571828504891230e-1) *
                                  r +
                              1.78482653991729133580e0) *
                                 r +
                             5.46378491116411436990e0) *
                                r +
                            6.65790464350110377720e0);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) *
                                    r +
                                7.86869131145613259100e-4) *
                                   r +
                               1.48753612908506148525e-2) *
                                  r +
                              1.36929880922735805310e-1) *
                                 r +
                             5.99832206555887937690e-1) *
                                r +
                            1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

}  // namespace l2
