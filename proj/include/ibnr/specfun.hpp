#pragma once

// Gamma/Beta family, Gauss 2F1, Kummer 1F1 and the Mittag-Leffler function
// on the real arguments the IBNR formulas need.

namespace ibnr {

struct SeriesControl {
    double rel_tol = 1e-12;
    int max_terms = 10000;

    void validate() const;
};

double gamma_fn(double x);
double log_gamma(double x);
// log|Γ(x)| for any non-pole real x; *sign receives the sign of Γ(x).
double log_gamma_signed(double x, int* sign);
// 1/Γ(x), zero at the poles.
double rgamma(double x);
double beta_fn(double a, double b);
double log_beta(double a, double b);

double incomplete_beta(double a, double b, double x, const SeriesControl& ctl = {});
double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

enum class KummerRegime {
    Taylor,
    Asymptotic,
    TransformTaylor,      // e^z 1F1(b-a, b, -z), inner Taylor
    TransformAsymptotic,  // e^z 1F1(b-a, b, -z), inner asymptotic expansion
};

const char* to_string(KummerRegime r);

struct KummerValue {
    double value;
    KummerRegime regime;
};

struct LogKummerValue {
    double log_value;
    KummerRegime regime;
};

// Crossover between the Taylor series and the large-z expansion is
// z > kummer_crossover * max(1, b).
inline constexpr double kummer_crossover = 40.0;

KummerValue kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});
LogKummerValue log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});
// e^{-z} 1F1(a, b, z), finite for every z >= 0 even when 1F1 itself overflows.
double kummer_scaled(double a, double b, double z, const SeriesControl& ctl = {});

double mittag_leffler(double alpha, double z);

}  // namespace ibnr
