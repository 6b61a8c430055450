#include "jcw/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jcw/oracle.hpp"

namespace jcw {

namespace {

using nlohmann::json;

constexpr double kWignerBound = 2.0 / M_PI;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string fmt_time_label(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

// ---- config parsing -------------------------------------------------------

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw SchemaError("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) {
        throw SchemaError("missing key \"" + key + "\" in " + where + " (expected number)");
    }
    if (!obj[key].is_number()) {
        throw SchemaError("key \"" + key + "\" in " + where + " must be a number");
    }
    return obj[key].get<double>();
}

Complex parse_complex(const json& v, const std::string& where) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return Complex(v[0].get<double>(), v[1].get<double>());
    }
    throw SchemaError(where + " must be a number or [re, im] pair");
}

FieldSpec parse_field(const json& f) {
    if (!f.is_object() || !f.contains("type") || !f["type"].is_string()) {
        throw SchemaError("\"field\" must be an object with a string \"type\"");
    }
    std::string type = f["type"].get<std::string>();
    if (type == "coherent") {
        reject_unknown_keys(f, {"type", "alpha0"}, "field");
        if (!f.contains("alpha0")) throw SchemaError("coherent field requires \"alpha0\"");
        return CoherentSpec{parse_complex(f["alpha0"], "field.alpha0")};
    }
    if (type == "cat") {
        reject_unknown_keys(f, {"type", "alpha0", "phi", "sign"}, "field");
        if (!f.contains("alpha0")) throw SchemaError("cat field requires \"alpha0\"");
        CatSpec s;
        s.alpha0 = parse_complex(f["alpha0"], "field.alpha0");
        s.phi = f.contains("phi") ? get_number(f, "phi", "field") : 0.0;
        s.sign = +1;
        if (f.contains("sign")) {
            if (!f["sign"].is_string() ||
                (f["sign"] != "+" && f["sign"] != "-")) {
                throw SchemaError("field.sign must be \"+\" or \"-\"");
            }
            s.sign = f["sign"] == "+" ? +1 : -1;
        }
        return s;
    }
    if (type == "thermal") {
        reject_unknown_keys(f, {"type", "nbar"}, "field");
        return ThermalSpec{get_number(f, "nbar", "field")};
    }
    if (type == "fock") {
        reject_unknown_keys(f, {"type", "n"}, "field");
        double n = get_number(f, "n", "field");
        if (n != std::floor(n)) throw SchemaError("field.n must be an integer");
        return FockSpec{static_cast<int>(n)};
    }
    throw SchemaError("field.type must be coherent, cat, thermal, or fock");
}

Complex parse_mag_phase(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw SchemaError(where + " must be a [magnitude, phase] pair");
    }
    return std::polar(v[0].get<double>(), v[1].get<double>());
}

std::vector<double> parse_times(const json& t, const std::string& where) {
    std::vector<double> out;
    if (t.is_array()) {
        for (const auto& v : t) {
            if (!v.is_number()) throw SchemaError(where + " entries must be numbers");
            out.push_back(v.get<double>());
        }
    } else if (t.is_object()) {
        reject_unknown_keys(t, {"start", "stop", "step"}, where);
        double start = get_number(t, "start", where);
        double stop = get_number(t, "stop", where);
        double step = get_number(t, "step", where);
        if (!(step > 0.0) || stop < start) {
            throw SchemaError(where + " requires step > 0 and stop >= start");
        }
        int n = static_cast<int>(std::round((stop - start) / step));
        for (int i = 0; i <= n; ++i) out.push_back(start + i * step);
    } else {
        throw SchemaError(where + " must be an array or {start, stop, step} object");
    }
    if (!std::is_sorted(out.begin(), out.end())) {
        throw SchemaError(where + " must be monotone nondecreasing");
    }
    return out;
}

std::vector<double> default_times() {
    std::vector<double> out;
    for (int i = 0; i <= 1200; ++i) out.push_back(i * 0.01);
    return out;
}

// ---- output helpers -------------------------------------------------------

std::uint32_t crc32(const std::string& data) {
    static std::uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            table[i] = c;
        }
        init = true;
    }
    std::uint32_t c = 0xFFFFFFFFu;
    for (unsigned char ch : data) c = table[(c ^ ch) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

json field_to_json(const FieldSpec& spec) {
    json f;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CoherentSpec>) {
                f["type"] = "coherent";
                f["alpha0"] = {s.alpha0.real(), s.alpha0.imag()};
            } else if constexpr (std::is_same_v<T, CatSpec>) {
                f["type"] = "cat";
                f["alpha0"] = {s.alpha0.real(), s.alpha0.imag()};
                f["phi"] = s.phi;
                f["sign"] = s.sign > 0 ? "+" : "-";
            } else if constexpr (std::is_same_v<T, ThermalSpec>) {
                f["type"] = "thermal";
                f["nbar"] = s.nbar;
            } else {
                f["type"] = "fock";
                f["n"] = s.n;
            }
        },
        spec);
    return f;
}

json scenario_to_json(const Scenario& s, const GridSpec& grid) {
    json j;
    j["name"] = s.name;
    j["field"] = field_to_json(s.field);
    j["atom"] = {{"ca", {std::abs(s.atom.Ca0), std::arg(s.atom.Ca0)}},
                 {"cb", {std::abs(s.atom.Cb0), std::arg(s.atom.Cb0)}}};
    j["detuning"] = s.delta_over_g;
    j["times"] = s.time_samples;
    j["snapshots"] = s.snapshot_times;
    j["grid"] = {{"center", {grid.center.real(), grid.center.imag()}},
                 {"half_width", grid.half_width},
                 {"step", grid.step}};
    j["outputs"] = s.outputs;
    j["verify"] = s.verify;
    j["verify_tol"] = s.verify_tol;
    j["eps_tail"] = s.eps_tail;
    if (s.nmax_override) j["nmax"] = *s.nmax_override;
    return j;
}

bool wants(const Scenario& s, const std::string& artifact) {
    return std::find(s.outputs.begin(), s.outputs.end(), artifact) != s.outputs.end();
}

Complex signature_reference(const FieldSpec& spec) {
    if (const auto* c = std::get_if<CoherentSpec>(&spec)) return c->alpha0;
    if (const auto* c = std::get_if<CatSpec>(&spec)) return c->alpha0;
    return Complex{1.0, 0.0};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("config root must be a JSON object");
    reject_unknown_keys(doc,
                        {"name", "field", "atom", "detuning", "times", "snapshots",
                         "grid", "outputs", "verify", "verify_tol", "eps_tail", "nmax"},
                        "config root");

    Scenario s;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw SchemaError("\"name\" must be a string");
        s.name = doc["name"].get<std::string>();
    }
    if (doc.contains("field")) s.field = parse_field(doc["field"]);
    if (doc.contains("atom")) {
        const auto& a = doc["atom"];
        if (!a.is_object()) throw SchemaError("\"atom\" must be an object");
        reject_unknown_keys(a, {"ca", "cb"}, "atom");
        if (a.contains("ca")) s.atom.Ca0 = parse_mag_phase(a["ca"], "atom.ca");
        if (a.contains("cb")) s.atom.Cb0 = parse_mag_phase(a["cb"], "atom.cb");
        else if (a.contains("ca")) s.atom.Cb0 = Complex{0.0, 0.0};
        try {
            s.atom.validate();
        } catch (const InvalidParameterError& e) {
            throw SchemaError(std::string("atom: ") + e.what());
        }
    }
    if (doc.contains("detuning")) s.delta_over_g = get_number(doc, "detuning", "config root");
    s.time_samples =
        doc.contains("times") ? parse_times(doc["times"], "times") : default_times();
    if (doc.contains("snapshots")) {
        s.snapshot_times = parse_times(doc["snapshots"], "snapshots");
        if (!s.time_samples.empty() && !s.snapshot_times.empty()) {
            if (s.snapshot_times.front() < s.time_samples.front() ||
                s.snapshot_times.back() > s.time_samples.back()) {
                throw SchemaError("snapshots must lie within the times range");
            }
        }
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_object()) throw SchemaError("\"grid\" must be an object");
        reject_unknown_keys(g, {"center", "half_width", "step"}, "grid");
        GridSpec spec = default_grid(s.field);
        if (g.contains("center")) spec.center = parse_complex(g["center"], "grid.center");
        if (g.contains("half_width")) spec.half_width = get_number(g, "half_width", "grid");
        if (g.contains("step")) spec.step = get_number(g, "step", "grid");
        try {
            spec.validate();
        } catch (const InvalidParameterError& e) {
            throw SchemaError(std::string("grid: ") + e.what());
        }
        s.grid = spec;
    }
    if (doc.contains("outputs")) {
        if (!doc["outputs"].is_array()) throw SchemaError("\"outputs\" must be an array");
        s.outputs.clear();
        for (const auto& v : doc["outputs"]) {
            if (!v.is_string()) throw SchemaError("\"outputs\" entries must be strings");
            std::string o = v.get<std::string>();
            if (o != "inversion" && o != "wigner" && o != "metrics" && o != "heatmaps") {
                throw SchemaError("unknown output artifact \"" + o + "\"");
            }
            s.outputs.push_back(o);
        }
    }
    if (doc.contains("verify")) {
        if (!doc["verify"].is_boolean()) throw SchemaError("\"verify\" must be a boolean");
        s.verify = doc["verify"].get<bool>();
    }
    if (doc.contains("verify_tol")) s.verify_tol = get_number(doc, "verify_tol", "config root");
    if (doc.contains("eps_tail")) {
        s.eps_tail = get_number(doc, "eps_tail", "config root");
        if (!(s.eps_tail > 0.0) || s.eps_tail > 1e-3) {
            throw SchemaError("eps_tail must lie in (0, 1e-3]");
        }
    }
    if (doc.contains("nmax")) {
        if (!doc["nmax"].is_number_integer()) throw SchemaError("\"nmax\" must be an integer");
        s.nmax_override = doc["nmax"].get<int>();
    }
    // surface constructor precondition violations as schema diagnostics
    try {
        choose_truncation(s.field, s.eps_tail);
    } catch (const InvalidParameterError& e) {
        throw SchemaError(std::string("field: ") + e.what());
    }
    return s;
}

bool is_preset(const std::string& name) {
    return name == "fig1" || name == "fig2" || name == "fig3" || name == "fig4";
}

Scenario preset(const std::string& name) {
    Scenario s;
    s.name = name;
    s.time_samples = default_times();
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (name == "fig1") {
        s.field = CoherentSpec{Complex{1.0, 0.0}};
        s.snapshot_times = {0.0, 4.4, 8.0};
    } else if (name == "fig2") {
        s.field = CatSpec{Complex{std::sqrt(5.0), 0.0}, 0.0, +1};
        s.snapshot_times = {0.0, 1.5, 3.5, 7.2, 7.45};
    } else if (name == "fig3") {
        s.field = CatSpec{Complex{std::sqrt(5.0), 0.0}, 0.0, +1};
        s.atom.Ca0 = Complex{inv_sqrt2, 0.0};
        s.atom.Cb0 = Complex{inv_sqrt2, 0.0};
        s.snapshot_times = {0.0, 4.4, 7.2};
    } else if (name == "fig4") {
        s.field = ThermalSpec{1.0};
        s.snapshot_times = {0.0, 2.0, 4.0, 6.0};
    } else {
        throw InvalidParameterError("unknown preset \"" + name + "\"");
    }
    return s;
}

void render_heatmap(const WignerGrid& grid, const std::filesystem::path& path) {
    const int n = static_cast<int>(grid.values.rows());
    std::ostringstream img;
    img << "P6\n" << n << " " << n << "\n255\n";
    // rows top-to-bottom = decreasing Im(alpha); columns = increasing Re(alpha)
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n; ++i) {
            double v = grid.values(i, j) / kWignerBound;
            v = std::clamp(v, -1.0, 1.0);
            unsigned char r, g, b;
            if (v >= 0.0) {  // white -> red
                r = 255;
                g = b = static_cast<unsigned char>(std::lround(255.0 * (1.0 - v)));
            } else {  // white -> blue
                b = 255;
                r = g = static_cast<unsigned char>(std::lround(255.0 * (1.0 + v)));
            }
            img.put(static_cast<char>(r));
            img.put(static_cast<char>(g));
            img.put(static_cast<char>(b));
        }
    }
    write_file(path, img.str());

    std::ostringstream meta;
    meta << "axes: x = Re(alpha), y = Im(alpha)\n"
         << "center: " << fmt_double(grid.spec.center.real()) << " "
         << fmt_double(grid.spec.center.imag()) << "\n"
         << "half_width: " << fmt_double(grid.spec.half_width) << "\n"
         << "step: " << fmt_double(grid.spec.step) << "\n"
         << "value_scale: [" << fmt_double(-kWignerBound) << ", "
         << fmt_double(kWignerBound) << "]\n"
         << "colormap: diverging blue-white-red\n"
         << "nmax_used: " << grid.nmax_used << "\n";
    std::filesystem::path sidecar = path;
    sidecar.replace_extension(".txt");
    write_file(sidecar, meta.str());
}

RunReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
    RunReport report;
    try {
        std::filesystem::create_directories(out_dir);

        int nmax = s.nmax_override ? *s.nmax_override
                                   : choose_truncation(s.field, s.eps_tail);
        report.nmax_used = nmax;
        FieldState field = make_field(s.field, nmax, s.eps_tail);
        GridSpec grid_spec = s.grid ? *s.grid : default_grid(s.field);
        grid_spec.validate();

        ModelParams params;
        params.delta_over_g = s.delta_over_g;
        const bool diagonal = field.is_diagonal();

        std::map<std::string, std::uint32_t> checksums;
        auto emit = [&](const std::string& name, const std::string& content) {
            write_file(out_dir / name, content);
            checksums[name] = crc32(content);
        };

        if (wants(s, "inversion")) {
            auto series = inversion_series(field, s.atom, params, s.time_samples);
            std::ostringstream csv;
            csv << "gt,n_ab\n";
            for (const auto& [t, v] : series) {
                csv << fmt_double(t) << "," << fmt_double(v) << "\n";
            }
            emit("inversion.csv", csv.str());
        }

        json metrics = json::object();
        std::string verify_failure;
        for (double t : s.snapshot_times) {
            ModelParams pt = params;
            pt.gt = t;
            EvolvedField ev = diagonal ? evolve_field_diagonal(field, s.atom, pt)
                                       : evolve_branches(field, s.atom, pt);
            WignerGrid wg = wigner_grid(ev.rho_f, grid_spec);
            std::string label = fmt_time_label(t);

            if (wants(s, "wigner")) {
                std::ostringstream csv;
                csv << "re_alpha,im_alpha,w\n";
                int npts = grid_spec.points_per_axis();
                for (int i = 0; i < npts; ++i) {
                    for (int j = 0; j < npts; ++j) {
                        Complex a = wg.alpha_at(i, j);
                        csv << fmt_double(a.real()) << "," << fmt_double(a.imag()) << ","
                            << fmt_double(wg.values(i, j)) << "\n";
                    }
                }
                emit("wigner_gt" + label + ".csv", csv.str());
            }
            if (wants(s, "heatmaps")) {
                std::filesystem::path img = out_dir / ("wigner_gt" + label + ".ppm");
                render_heatmap(wg, img);
                std::ifstream in(img, std::ios::binary);
                std::stringstream buf;
                buf << in.rdbuf();
                checksums[img.filename().string()] = crc32(buf.str());
            }
            if (wants(s, "metrics")) {
                auto sig = cat_signature(wg, signature_reference(s.field));
                metrics[label] = {
                    {"negativity_volume", negativity_volume(wg)},
                    {"grid_integral", grid_integral(wg)},
                    {"trace_drift", std::abs(ev.rho_f.trace().real() - field.trace())},
                    {"cat_signature",
                     {{"peak_plus", sig.peak_plus},
                      {"peak_minus", sig.peak_minus},
                      {"loc_plus", {sig.loc_plus.real(), sig.loc_plus.imag()}},
                      {"loc_minus", {sig.loc_minus.real(), sig.loc_minus.imag()}},
                      {"fringe_extremum", sig.fringe_extremum},
                      {"fringe_sign", sig.fringe_sign}}}};
            }
            if (s.verify && verify_failure.empty()) {
                auto orc = oracle::evolve(field, s.atom, pt);
                double evo_err = (ev.rho_f - orc.rho_f).cwiseAbs().maxCoeff();
                double wig_err = 0.0;
                for (Complex a : {Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 1.0},
                                  Complex{-1.0, 0.5}}) {
                    int dim = oracle::wigner_required_dim(field.dim(), a);
                    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(dim, dim);
                    padded.topLeftCorner(ev.rho_f.rows(), ev.rho_f.cols()) = ev.rho_f;
                    wig_err = std::max(
                        wig_err, std::abs(oracle::wigner(padded, a) - wigner_point(ev.rho_f, a)));
                }
                double wig_tol = std::max(1e-6, s.verify_tol);
                if (evo_err > s.verify_tol || wig_err > wig_tol) {
                    std::ostringstream msg;
                    msg << "verification failed at gt=" << label << ": evolution error "
                        << evo_err << " (tol " << s.verify_tol << "), wigner error "
                        << wig_err << " (tol " << wig_tol << ")";
                    verify_failure = msg.str();
                }
            }
        }

        if (wants(s, "metrics")) emit("metrics.json", metrics.dump(2) + "\n");

        json manifest;
        manifest["scenario"] = scenario_to_json(s, grid_spec);
        manifest["nmax_used"] = nmax;
        manifest["checksums_crc32"] = json::object();
        for (const auto& [name, crc] : checksums) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%08x", crc);
            manifest["checksums_crc32"][name] = buf;
        }
        if (!verify_failure.empty()) manifest["verification_failure"] = verify_failure;
        write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

        if (!verify_failure.empty()) {
            report.exit_code = 2;
            report.message = verify_failure;
            return report;
        }
        report.message = "ok";
        return report;
    } catch (const std::filesystem::filesystem_error& e) {
        report.exit_code = 1;
        report.message = e.what();
        return report;
    } catch (const std::ios_base::failure& e) {
        report.exit_code = 1;
        report.message = e.what();
        return report;
    } catch (const std::runtime_error& e) {
        report.exit_code = 1;
        report.message = e.what();
        return report;
    }
}

}  // namespace jcw
