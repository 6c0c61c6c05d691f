#include "ibnr/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "ibnr/errors.hpp"
#include "ibnr/quadrature.hpp"

namespace ibnr {

namespace {

constexpr double pi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) < tol; }

[[noreturn]] void truncation_failure(const char* what, int terms, double last, double sum) {
    std::ostringstream os;
    os << what << ": series not converged after " << terms << " terms (last term " << last
       << ", partial sum " << sum << ")";
    throw NumericalError(os.str());
}

// Direct 2F1 power series; valid for |z| < 1 or a terminating series.
double hyp2f1_series(double a, double b, double c, double z, const SeriesControl& ctl) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) return sum;
        const double next = std::abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z);
        // Later ratios approach |z|, possibly from below.
        const double rho = std::max(next, std::abs(z));
        if (rho < 1.0) {
            const double tail = std::abs(term) * rho / (1.0 - rho);
            if (tail <= ctl.rel_tol * std::abs(sum)) return sum;
        }
    }
    truncation_failure("gauss_2f1", ctl.max_terms, term, sum);
}

// exp(sum of signed log-gammas) helpers for products of Gamma ratios.
struct SignedLog {
    double log = 0.0;
    int sign = 1;
    bool zero = false;

    void mul_gamma(double x) {
        int s = 1;
        log += log_gamma_signed(x, &s);
        sign *= s;
    }
    void div_gamma(double x) {
        if (is_nonpositive_integer(x)) {
            zero = true;
            return;
        }
        int s = 1;
        log -= log_gamma_signed(x, &s);
        sign *= s;
    }
    double value() const { return zero ? 0.0 : sign * std::exp(log); }
};

// Positive-z Taylor series of log 1F1 with running rescaling; all terms positive.
double log_kummer_taylor_pos(double a, double b, double z, const SeriesControl& ctl) {
    constexpr double big = 1e280;
    const double log_big = std::log(big);
    double term = 1.0, sum = 1.0, log_scale = 0.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        const double r = (a + k) / ((b + k) * (k + 1.0)) * z;
        term *= r;
        sum += term;
        if (sum > big) {
            sum /= big;
            term /= big;
            log_scale += log_big;
        }
        const double rn = (a + k + 1) / ((b + k + 1) * (k + 2.0)) * z;
        if (rn < 1.0 && rn <= r) {
            const double tail = term * rn / (1.0 - rn);
            if (tail <= ctl.rel_tol * sum) return log_scale + std::log(sum);
        }
    }
    truncation_failure("kummer_1f1 (Taylor)", ctl.max_terms, term, sum);
}

// Signed Taylor series for small |z| (used for -5 <= z < 0).
double kummer_taylor_signed(double a, double b, double z, const SeriesControl& ctl) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= (a + k) / ((b + k) * (k + 1.0)) * z;
        sum += term;
        if (k + 1 > std::abs(z) && std::abs(term) <= 0.1 * ctl.rel_tol * std::abs(sum)) return sum;
    }
    truncation_failure("kummer_1f1 (Taylor)", ctl.max_terms, term, sum);
}

// Large-z expansion Γ(b)/Γ(a) e^z z^{a-b} Σ (b-a)_k (1-a)_k / (k! z^k).
// Returns false if the asymptotic series does not reach tolerance.
bool log_kummer_asymptotic(double a, double b, double z, const SeriesControl& ctl, double* out) {
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 500; ++k) {
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z);
        if (std::abs(term) > 0.5 * prev && k > 2 && std::abs(term) > ctl.rel_tol * std::abs(sum)) return false;
        sum += term;
        if (std::abs(term) <= 0.1 * ctl.rel_tol * std::abs(sum)) {
            if (!(sum > 0)) return false;
            *out = log_gamma(b) - log_gamma(a) + z + (a - b) * std::log(z) + std::log(sum);
            return true;
        }
        prev = std::abs(term);
    }
    return false;
}

// log 1F1(a,b,z) for z >= 0 with regime report.
LogKummerValue log_kummer_pos(double a, double b, double z, const SeriesControl& ctl) {
    if (z == 0.0) return {0.0, KummerRegime::Taylor};
    if (z > kummer_crossover * std::max(1.0, b)) {
        double v;
        if (log_kummer_asymptotic(a, b, z, ctl, &v)) return {v, KummerRegime::Asymptotic};
    }
    SeriesControl wide = ctl;
    // The Taylor series of a large positive argument needs about z terms.
    wide.max_terms = std::max(ctl.max_terms, static_cast<int>(std::min(3.0 * z + 1000.0, 2.0e8)));
    return {log_kummer_taylor_pos(a, b, z, wide), KummerRegime::Taylor};
}

void check_kummer_args(double a, double b) {
    if (!(a > 0) || !(b > a)) throw DomainError("kummer_1f1 requires b > a > 0");
}

double ml_series(double alpha, double x) {
    // Σ (-x)^k / Γ(αk+1), used when x^{1/α} <= 1.
    double sum = 1.0;
    const double lx = std::log(x);
    for (int k = 1; k < 20000; ++k) {
        const double mag = std::exp(k * lx - log_gamma(alpha * k + 1.0));
        sum += (k % 2 ? -mag : mag);
        if (mag < 1e-17 * std::abs(sum) && alpha * k > 2.0) return sum;
    }
    throw NumericalError("mittag_leffler: power series did not converge");
}

bool ml_asymptotic(double alpha, double x, double* out) {
    // E_α(-x) ~ Σ_{k>=1} (-1)^{k+1} x^{-k} / Γ(1-αk).
    double sum = 0.0, prev = std::numeric_limits<double>::infinity();
    const double lx = std::log(x);
    for (int k = 1; k < 200; ++k) {
        const double rg = rgamma(1.0 - alpha * k);
        const double term = (k % 2 ? 1.0 : -1.0) * rg * std::exp(-k * lx);
        const double mag = std::abs(term);
        if (mag != 0.0 && mag > prev) return false;
        sum += term;
        if (mag != 0.0) prev = mag;
        if (k > 2 && mag <= 1e-16 * std::abs(sum) && mag != 0.0) {
            *out = sum;
            return true;
        }
    }
    return false;
}

double ml_integral(double alpha, double x) {
    // E_α(-t^α) = ∫ e^{-rt} K_α(r) dr with K_α the spectral density of the
    // completely monotone function; substituting ρ = r^α removes r^{α-1}.
    const double t = std::pow(x, 1.0 / alpha);
    const double c = std::cos(alpha * pi);
    const double rho_max = std::pow(60.0 / t, alpha);
    auto f = [&](double rho) {
        const double r = std::pow(rho, 1.0 / alpha);
        return std::exp(-r * t) / (rho * rho + 2.0 * rho * c + 1.0);
    };
    std::vector<double> cand;
    // Peak of the kernel near ρ = -cos(απ) when α > 1/2.
    if (-c > 0) {
        const double w = std::max(std::sin(alpha * pi), 1e-8);
        for (double d : {-4.0, -1.0, 0.0, 1.0, 4.0}) cand.push_back(-c + d * w);
    }
    for (double p = 1e-3; p < rho_max; p *= 4.0) cand.push_back(p);
    std::sort(cand.begin(), cand.end());
    std::vector<double> pts{0.0};
    for (double p : cand)
        if (p > pts.back() && p < rho_max) pts.push_back(p);
    pts.push_back(rho_max);
    QuadratureControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = 1e-13;
    qc.max_depth = 60;
    const double I = integrate(f, pts, qc);
    return std::sin(alpha * pi) / (alpha * pi) * I;
}

}  // namespace

void SeriesControl::validate() const {
    if (!(rel_tol > 0 && rel_tol < 1)) throw DomainError("SeriesControl.rel_tol must lie in (0, 1)");
    if (max_terms < 1) throw DomainError("SeriesControl.max_terms must be >= 1");
}

double gamma_fn(double x) {
    if (!(x > 0)) throw DomainError("gamma_fn requires x > 0");
    if (x > 171.62) throw RangeError("gamma_fn overflows for x > 171.62");
    return std::tgamma(x);
}

double log_gamma_signed(double x, int* sign) {
    if (is_nonpositive_integer(x)) throw DomainError("Gamma pole at a non-positive integer");
#if defined(__GLIBC__)
    int s = 1;
    const double v = ::lgamma_r(x, &s);
    if (sign) *sign = s;
    return v;
#else
    if (sign) *sign = (x > 0 || static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
    return std::lgamma(x);
#endif
}

double log_gamma(double x) {
    if (!(x > 0)) throw DomainError("log_gamma requires x > 0");
    return log_gamma_signed(x, nullptr);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 171.62) return 0.0;
    return 1.0 / std::tgamma(x);
}

double log_beta(double a, double b) {
    if (!(a > 0) || !(b > 0)) throw DomainError("beta_fn requires a, b > 0");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_fn(double a, double b) {
    const double v = std::exp(log_beta(a, b));
    if (!std::isfinite(v)) throw RangeError("beta_fn overflow");
    return v;
}

double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
    ctl.validate();
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c must not be a non-positive integer");
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("gauss_2f1 requires z in [0, 1]");
    if (z == 0.0) return 1.0;
    const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    const double s = c - a - b;
    if (z == 1.0) {
        if (terminating && !(s > 0)) {
            // Finite polynomial; sum it exactly.
            SeriesControl wide = ctl;
            wide.max_terms = std::max(ctl.max_terms, 1 + static_cast<int>(std::abs(std::min(a, b))));
            return hyp2f1_series(a, b, c, 1.0, wide);
        }
        if (!(s > 0)) throw DomainError("gauss_2f1 at z = 1 requires c - a - b > 0");
        SignedLog g;
        g.mul_gamma(c);
        g.mul_gamma(s);
        g.div_gamma(c - a);
        g.div_gamma(c - b);
        return g.value();
    }
    constexpr double z_star = 0.75;
    if (terminating || z <= z_star || near_integer(s, 1e-8)) return hyp2f1_series(a, b, c, z, ctl);
    // z -> 1 - z connection formula; both inner series have argument < 1/4.
    const double w = 1.0 - z;
    SignedLog c1;
    c1.mul_gamma(c);
    c1.mul_gamma(s);
    c1.div_gamma(c - a);
    c1.div_gamma(c - b);
    SignedLog c2;
    c2.mul_gamma(c);
    c2.mul_gamma(-s);
    c2.div_gamma(a);
    c2.div_gamma(b);
    double result = 0.0;
    if (!c1.zero) result += c1.value() * hyp2f1_series(a, b, 1.0 - s, w, ctl);
    if (!c2.zero) result += c2.value() * std::pow(w, s) * hyp2f1_series(c - a, c - b, 1.0 + s, w, ctl);
    return result;
}

double incomplete_beta(double a, double b, double x, const SeriesControl& ctl) {
    if (!(a > 0)) throw DomainError("incomplete_beta requires a > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) {
        if (!(b > 0)) throw DomainError("incomplete_beta diverges at x = 1 when b <= 0");
        return beta_fn(a, b);
    }
    if (b > 0 && x > 0.5) {
        // Reflection keeps the hypergeometric argument below 1/2.
        const double y = 1.0 - x;
        return beta_fn(a, b) - std::pow(y, b) / b * gauss_2f1(b, 1.0 - a, b + 1.0, y, ctl);
    }
    return std::pow(x, a) / a * gauss_2f1(a, 1.0 - b, a + 1.0, x, ctl);
}

const char* to_string(KummerRegime r) {
    switch (r) {
        case KummerRegime::Taylor: return "taylor";
        case KummerRegime::Asymptotic: return "asymptotic";
        case KummerRegime::TransformTaylor: return "kummer-transform+taylor";
        case KummerRegime::TransformAsymptotic: return "kummer-transform+asymptotic";
    }
    return "?";
}

LogKummerValue log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
    ctl.validate();
    check_kummer_args(a, b);
    if (z >= 0.0) return log_kummer_pos(a, b, z, ctl);
    if (z >= -5.0) {
        // Cancellation in the alternating series is at most about e^{2|z|}.
        return {std::log(kummer_taylor_signed(a, b, z, ctl)), KummerRegime::Taylor};
    }
    const LogKummerValue inner = log_kummer_pos(b - a, b, -z, ctl);
    const KummerRegime reg = inner.regime == KummerRegime::Asymptotic ? KummerRegime::TransformAsymptotic
                                                                        : KummerRegime::TransformTaylor;
    return {z + inner.log_value, reg};
}

KummerValue kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
    ctl.validate();
    check_kummer_args(a, b);
    if (z < 0.0 && z >= -5.0) return {kummer_taylor_signed(a, b, z, ctl), KummerRegime::Taylor};
    const LogKummerValue lv = log_kummer_1f1(a, b, z, ctl);
    const double v = std::exp(lv.log_value);
    if (!std::isfinite(v)) throw RangeError("kummer_1f1 overflow; use log_kummer_1f1 or kummer_scaled");
    return {v, lv.regime};
}

double kummer_scaled(double a, double b, double z, const SeriesControl& ctl) {
    if (!(z >= 0)) throw DomainError("kummer_scaled requires z >= 0");
    return std::exp(log_kummer_1f1(a, b, z, ctl).log_value - z);
}

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("mittag_leffler requires alpha in (0, 1]");
    if (!(z <= 0)) throw DomainError("mittag_leffler is implemented for z <= 0");
    if (z == 0.0) return 1.0;
    if (alpha == 1.0) return std::exp(z);
    const double x = -z;
    if (x <= 1.0) return ml_series(alpha, x);
    if (x >= 50.0) {
        double v;
        if (ml_asymptotic(alpha, x, &v)) return v;
    }
    return ml_integral(alpha, x);
}

}  // namespace ibnr
