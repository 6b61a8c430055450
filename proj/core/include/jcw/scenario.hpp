#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jcw/fock_field.hpp"
#include "jcw/jc_evolution.hpp"
#include "jcw/wigner.hpp"

namespace jcw {

// Fully resolved run description; every default is materialized so the
// manifest alone reproduces the run.
struct Scenario {
    std::string name = "custom";
    FieldSpec field = CoherentSpec{Complex{1.0, 0.0}};
    AtomPrep atom;
    double delta_over_g = 0.0;
    std::vector<double> time_samples;    // gt values for the inversion series
    std::vector<double> snapshot_times;  // gt values for Wigner grids
    std::optional<GridSpec> grid;        // default: default_grid(field)
    std::vector<std::string> outputs = {"inversion", "wigner", "metrics", "heatmaps"};
    bool verify = false;
    double verify_tol = 1e-9;
    double eps_tail = kDefaultEpsTail;
    std::optional<int> nmax_override;
};

// JSON config document -> validated Scenario; unknown keys rejected.
Scenario parse_scenario(const std::string& text);

// Built-in scenarios fig1..fig4.
Scenario preset(const std::string& name);
bool is_preset(const std::string& name);

struct RunReport {
    int exit_code = 0;  // 0 ok, 1 I/O failure, 2 verification failure
    std::string message;
    int nmax_used = 0;
};

RunReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

// 8-bit PPM with a fixed [-2/pi, 2/pi] diverging scale; writes a .txt
// sidecar with the axes metadata next to the image.
void render_heatmap(const WignerGrid& grid, const std::filesystem::path& path);

}  // namespace jcw
