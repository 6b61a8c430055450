#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "jcw/oracle.hpp"
#include "jcw/scenario.hpp"

namespace {

jcw::Scenario load_scenario(const std::string& source) {
    if (jcw::is_preset(source)) return jcw::preset(source);
    std::ifstream in(source);
    if (!in) {
        throw std::runtime_error("cannot read config file \"" + source +
                                 "\" (not a preset fig1..fig4 either)");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return jcw::parse_scenario(buf.str());
}

int check(bool ok, const char* what, int& failures) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
    if (!ok) ++failures;
    return ok ? 0 : 1;
}

int selftest() {
    using namespace jcw;
    int failures = 0;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // |r_n|^2 + q_n^2 = 1 across a randomized sweep
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            ModelParams p;
            p.delta_over_g = 4.0 * uni(rng) - 2.0;
            p.gt = 20.0 * uni(rng);
            auto c = rabi_coefficients(static_cast<int>(uni(rng) * 50), p);
            worst = std::max(worst, std::abs(std::norm(c.r) + c.q * c.q - 1.0));
        }
        check(worst < 1e-12, "rabi coefficient normalization |r|^2 + q^2 = 1", failures);
    }
    // trace conservation and hermiticity on a coherent evolution
    {
        auto field = make_coherent({1.0, 0.0}, 16);
        ModelParams p;
        p.gt = 3.0;
        auto ev = evolve_branches(field, AtomPrep{}, p);
        bool ok = std::abs(ev.rho_f.trace().real() - 1.0) < 1e-10 &&
                  (ev.rho_f - ev.rho_f.adjoint()).cwiseAbs().maxCoeff() == 0.0;
        check(ok, "evolution trace conservation and exact hermiticity", failures);
    }
    // parity identity at the origin
    {
        auto field = make_thermal(1.0, 35);
        double w0 = wigner_point(field.matrix(), {0.0, 0.0});
        double parity = 0.0;
        for (int n = 0; n <= 35; ++n) {
            parity += ((n % 2 == 0) ? 1.0 : -1.0) * field.matrix()(n, n).real();
        }
        check(std::abs(w0 - (2.0 / M_PI) * parity) < 1e-12,
              "Wigner parity identity at the origin", failures);
    }
    // analytic coherent anchor
    {
        auto field = make_coherent({1.0, 0.0}, 20);
        double w = wigner_point(field.matrix(), {1.0, 0.0});
        check(std::abs(w - 2.0 / M_PI) < 1e-10, "coherent Wigner peak = 2/pi", failures);
    }
    // closed form vs oracle evolution
    {
        auto field = make_coherent({1.0, 0.0}, 16);
        ModelParams p;
        p.delta_over_g = 0.7;
        p.gt = 5.0;
        AtomPrep atom{{0.6, 0.0}, {0.0, 0.8}};
        auto ev = evolve_branches(field, atom, p);
        auto orc = oracle::evolve(field, atom, p);
        double err = (ev.rho_f - orc.rho_f).cwiseAbs().maxCoeff();
        check(err < 1e-9, "closed-form evolution matches oracle", failures);
    }
    // series vs displacement-parity oracle
    {
        auto field = make_coherent({1.3, 0.0}, 20);
        Complex a{0.5, -0.8};
        int dim = oracle::wigner_required_dim(field.dim(), a);
        Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(dim, dim);
        padded.topLeftCorner(field.dim(), field.dim()) = field.matrix();
        double err = std::abs(oracle::wigner(padded, a) -
                              wigner_point(field.matrix(), a));
        check(err < 1e-6, "Wigner series matches displacement-parity oracle", failures);
    }
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jaynes-Cummings transient field simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario (preset fig1..fig4 or JSON config)");
    std::string source, out_dir = "out";
    bool verify = false;
    double grid_step = 0.0;
    int nmax = 0;
    run->add_option("scenario", source, "preset name or config path")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--verify", verify, "cross-check against the brute-force oracle");
    run->add_option("--grid-step", grid_step, "override phase-space grid step");
    run->add_option("--nmax", nmax, "override Fock-basis truncation");

    auto* st = app.add_subcommand("selftest", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    if (st->parsed()) return selftest();

    try {
        jcw::Scenario s = load_scenario(source);
        if (verify) s.verify = true;
        if (nmax > 0) s.nmax_override = nmax;
        if (grid_step > 0.0) {
            jcw::GridSpec g = s.grid ? *s.grid : jcw::default_grid(s.field);
            g.step = grid_step;
            s.grid = g;
        }
        auto report = jcw::run_scenario(s, out_dir);
        if (report.exit_code != 0) {
            std::cerr << "error: " << report.message << "\n";
        } else {
            std::cout << "wrote " << out_dir << " (nmax " << report.nmax_used << ")\n";
        }
        return report.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
