#include "jcw/wigner.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "jcw/parallel.hpp"

namespace jcw {

namespace {

constexpr double kTwoOverPi = 2.0 / M_PI;
constexpr double kRescaleAt = 1e250;
const double kRescaleLog = std::log(kRescaleAt);

// Neumaier compensated accumulator
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    double value() const { return s + c; }
};

}  // namespace

int GridSpec::points_per_axis() const {
    return static_cast<int>(std::round(2.0 * half_width / step)) + 1;
}

void GridSpec::validate() const {
    if (!(step > 0.0) || !(half_width > 0.0)) {
        throw InvalidParameterError("grid step and half_width must be > 0");
    }
    if (2.0 * half_width / step > 4096.0) {
        throw InvalidParameterError("grid exceeds 4096 points per axis");
    }
}

GridSpec default_grid(const FieldSpec& spec) {
    GridSpec g;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CoherentSpec> || std::is_same_v<T, CatSpec>) {
                g.half_width = std::max(4.0, std::abs(s.alpha0) + 3.0);
            } else if constexpr (std::is_same_v<T, ThermalSpec>) {
                g.half_width = 4.0 + 2.0 * std::sqrt(s.nbar);
            } else {
                g.half_width = std::max(4.0, std::sqrt(static_cast<double>(s.n)) + 3.0);
            }
        },
        spec);
    return g;
}

double laguerre_assoc(int n, int k, double x) {
    if (n < 0 || k < 0 || x < 0.0) {
        throw InvalidParameterError("laguerre_assoc requires n, k >= 0 and x >= 0");
    }
    if (n == 0) return 1.0;
    double lm1 = 1.0;           // L_0^k
    double l = 1.0 + k - x;     // L_1^k
    for (int j = 1; j < n; ++j) {
        double next = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm1) / (j + 1.0);
        lm1 = l;
        l = next;
    }
    return l;
}

double wigner_point(const Eigen::MatrixXcd& rho, Complex alpha) {
    const int dim = static_cast<int>(rho.rows());
    const int nmax = dim - 1;
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw InvalidParameterError("wigner_point requires trace within 1e-8 of 1");
    }

    const double a2 = std::norm(alpha);
    const double mod2a = 2.0 * std::abs(alpha);
    const double log2a = mod2a > 0.0 ? std::log(mod2a) : 0.0;
    const Complex phase_unit = mod2a > 0.0 ? (2.0 * alpha / mod2a) : Complex{1.0, 0.0};
    const double x = 4.0 * a2;

    std::vector<double> lg(dim + 1);
    for (int n = 0; n <= dim; ++n) lg[n] = std::lgamma(n + 1.0);

    KahanSum sum;
    Complex phase_k{1.0, 0.0};
    for (int k = 0; k <= nmax; ++k) {
        if (k > 0 && mod2a == 0.0) break;  // (2 alpha)^k vanishes
        // upward recurrence in n for fixed k, with running rescale so the raw
        // polynomial never leaves double range before the log prefactor lands
        double lm1 = 0.0, l = 1.0, scale_log = 0.0;
        double parity = 1.0;
        for (int n = 0; n + k <= nmax; ++n) {
            if (n >= 1) {
                int j = n - 1;
                double next = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm1) / (j + 1.0);
                lm1 = l;
                l = next;
                if (std::abs(l) > kRescaleAt || std::abs(lm1) > kRescaleAt) {
                    l /= kRescaleAt;
                    lm1 /= kRescaleAt;
                    scale_log += kRescaleLog;
                }
            }
            int m = n + k;
            double coupling;
            if (k == 0) {
                coupling = rho(n, n).real();
            } else {
                Complex z = rho(n, m);
                if (z == Complex{}) {
                    parity = -parity;
                    continue;
                }
                coupling = 2.0 * (phase_k * z).real();
            }
            if (coupling != 0.0) {
                double logpref = -2.0 * a2 + 0.5 * (lg[n] - lg[m]) + k * log2a + scale_log;
                double term = parity * l * std::exp(logpref) * coupling;
                if (!std::isfinite(term)) {
                    std::ostringstream msg;
                    msg << "non-finite Wigner term at (n, m) = (" << n << ", " << m << ")";
                    throw NumericalOverflowError(msg.str());
                }
                sum.add(term);
            }
            parity = -parity;
        }
        phase_k *= phase_unit;
    }
    return kTwoOverPi * sum.value();
}

WignerGrid wigner_grid(const Eigen::MatrixXcd& rho, const GridSpec& spec, bool serial) {
    spec.validate();
    const int npts = spec.points_per_axis();
    WignerGrid grid;
    grid.spec = spec;
    grid.nmax_used = static_cast<int>(rho.rows()) - 1;
    grid.values.resize(npts, npts);

    parallel_for(
        static_cast<std::size_t>(npts),
        [&](std::size_t i) {
            for (int j = 0; j < npts; ++j) {
                grid.values(static_cast<int>(i), j) =
                    wigner_point(rho, grid.alpha_at(static_cast<int>(i), j));
            }
        },
        serial);
    return grid;
}

double grid_integral(const WignerGrid& grid) {
    KahanSum sum;
    for (int i = 0; i < grid.values.rows(); ++i) {
        for (int j = 0; j < grid.values.cols(); ++j) sum.add(grid.values(i, j));
    }
    return sum.value() * grid.spec.step * grid.spec.step;
}

double negativity_volume(const WignerGrid& grid) {
    KahanSum sum;
    for (int i = 0; i < grid.values.rows(); ++i) {
        for (int j = 0; j < grid.values.cols(); ++j) {
            double w = grid.values(i, j);
            if (w < 0.0) sum.add(-w);
        }
    }
    return sum.value() * grid.spec.step * grid.spec.step;
}

double analytic_coherent_wigner(Complex alpha0, Complex alpha) {
    return kTwoOverPi * std::exp(-2.0 * std::norm(alpha - alpha0));
}

double analytic_thermal_wigner(double nbar, Complex alpha) {
    if (!(nbar >= 0.0)) throw InvalidParameterError("nbar must be >= 0");
    double w = 1.0 + 2.0 * nbar;
    return kTwoOverPi / w * std::exp(-2.0 * std::norm(alpha) / w);
}

CatSignature cat_signature(const WignerGrid& grid, Complex alpha0) {
    CatSignature sig;
    bool found_plus = false, found_minus = false, found_fringe = false;
    for (int i = 0; i < grid.values.rows(); ++i) {
        for (int j = 0; j < grid.values.cols(); ++j) {
            Complex a = grid.alpha_at(i, j);
            double w = grid.values(i, j);
            if (std::abs(a - alpha0) <= 1.0 && (!found_plus || w > sig.peak_plus)) {
                sig.peak_plus = w;
                sig.loc_plus = a;
                found_plus = true;
            }
            if (std::abs(a + alpha0) <= 1.0 && (!found_minus || w > sig.peak_minus)) {
                sig.peak_minus = w;
                sig.loc_minus = a;
                found_minus = true;
            }
            if (std::abs(a) <= 0.5 &&
                (!found_fringe || std::abs(w) > std::abs(sig.fringe_extremum))) {
                sig.fringe_extremum = w;
                found_fringe = true;
            }
        }
    }
    if (!found_plus || !found_minus || !found_fringe) {
        throw InvalidParameterError("grid does not cover the cat signature regions");
    }
    sig.fringe_sign = sig.fringe_extremum > 0.0 ? 1 : (sig.fringe_extremum < 0.0 ? -1 : 0);
    return sig;
}

}  // namespace jcw
