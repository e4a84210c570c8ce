#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace revmix {

// Probability function on the integers with finite stored support [-K, K]
// plus explicitly tracked tail mass for |k| > K.
struct IntegerPmf {
    int K = 0;
    std::vector<double> probs;  // index k + K
    double tail_mass = 0.0;

    double at(int k) const {
        return (k < -K || k > K) ? 0.0 : probs[static_cast<std::size_t>(k + K)];
    }
    double stored_mass() const;
    void validate(double tol = 1e-12) const;
};

// Symmetric integer law with mass 1-a at 0 and geometric tails
// (a/2) p (1-p)^(n-1) at +-n, truncated at K with tail mass a(1-p)^K.
IntegerPmf g_pmf(double a, double p, int K);

// support size needed so the truncation tail a(1-p)^K is <= cap
int g_support_for_tail(double a, double p, double cap = 1e-10);

// e^c - (1 + c)
std::complex<double> upsilon(std::complex<double> c);

// characteristic function of g_{a,p} in closed form
std::complex<double> g_cf(double a, double p, double t);

// log of g_cf, evaluated stably even when a is far below 1 ulp of 1
std::complex<double> g_cf_log(double a, double p, double t);

// [g_cf(a, p, t)]^count, via exp(count * log), stable for tiny a / huge count
std::complex<double> g_cf_pow(double a, double p, double t, double count);

// characteristic function exp(1/(1+t^2) - 1) of the compound
// Poisson(1)-sum-of-Laplace law; real-valued
double p1sl_cf(double t);

// draws from the compound Poisson(1)-sum-of-Laplace law
std::vector<double> p1sl_sample(std::int64_t count, std::uint64_t seed);

std::vector<double> default_t_grid(double t_max = 5.0, double step = 0.1);

// CF distance between p * (sum of J iid g_{a,p} variables) and the
// compound Poisson(1)-Laplace law: max over the grid of
// |g_cf(a,p,t*p)^J - p1sl_cf(t)|
double g_sum_cf_distance(double a, double p, double J,
                                  std::span<const double> t_grid);

// empirical characteristic function of samples on a t grid
struct CfGrid {
    std::vector<double> t_values;
    std::vector<std::complex<double>> values;

    void validate(double tol = 1e-12) const;
    void to_csv(std::ostream& os) const;  // t, re, im
};

CfGrid empirical_cf(std::span<const double> samples, std::span<const double> t_grid);

// sup over the grid of |ecf - reference| for a real-valued reference cf
double cf_sup_distance(const CfGrid& ecf, double (*reference)(double));

}  // namespace revmix
