#include "homoglab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "homoglab/coefficient.hpp"
#include "homoglab/corrector.hpp"
#include "homoglab/extraction.hpp"
#include "homoglab/harness.hpp"

namespace homoglab {

namespace {

constexpr double kTwoPiS = 6.283185307179586476925286766559;

struct ScenarioEntry {
    std::string description;
    Json defaults;
    std::function<Json(const ScenarioConfig&, std::map<std::string, std::string>&)> run;
};

/// Periodic wrap-sample of a unit-cell matrix field onto an integer-origin box.
MatrixField wrap_matrix_onto(const MatrixField& a_per, const Grid& box) {
    const int n = a_per.grid.cells_per_unit;
    if (box.cells_per_unit != n || box.dim != a_per.grid.dim)
        throw ResolutionMismatch("box resolution must match the unit cell");
    const auto wrap = [n](int v) { return ((v % n) + n) % n; };
    const int base0 = static_cast<int>(std::llround(-box.origin[0] / box.spacing()));
    const int base1 =
        box.dim == 2 ? static_cast<int>(std::llround(-box.origin[1] / box.spacing())) : 0;
    MatrixField out(box);
    for (int j = 0; j < box.cells[1]; ++j)
        for (int i = 0; i < box.cells[0]; ++i) {
            const auto pidx =
                a_per.grid.index(wrap(i - base0), box.dim == 2 ? wrap(j - base1) : 0);
            out.set(box.index(i, j), a_per.at(pidx));
        }
    return out;
}

Json run_harmonic_1d(const ScenarioConfig& cfg, std::map<std::string, std::string>&) {
    const int n = cfg.params.at("resolution").get<int>();
    const CoefficientSpec spec =
        CoefficientSpec::periodic_trig(2.0, {TrigTerm{1.0, {1, 0}, 0.0}}, 1.0);
    const MatrixField a = sample_field(spec, Grid::unit_cell(1, n));
    const CorrectorComponent w = periodic_corrector(a, 0);
    const HomogenizedTensor t = homogenized_tensor(a, {w});
    Json j;
    j["a_star"] = t.a_star.a00;
    j["resolution"] = t.resolution;
    j["solver"] = to_json(w.stats);
    return j;
}

Json run_laminate_2d(const ScenarioConfig& cfg, std::map<std::string, std::string>&) {
    const int n = cfg.params.at("resolution").get<int>();
    const double alpha = cfg.params.at("alpha").get<double>();
    const double beta = cfg.params.at("beta").get<double>();
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw ConfigInvalid("laminate phases must be positive");
    const Grid g = Grid::unit_cell(2, n);
    MatrixField a(g);
    for (int j1 = 0; j1 < g.cells[1]; ++j1)
        for (int i = 0; i < g.cells[0]; ++i) {
            const double x0 = g.center(0, i) - std::floor(g.center(0, i));
            const double v = x0 < 0.5 ? alpha : beta;
            a.set(g.index(i, j1), SymMat::scalar(2, v));
        }
    const CorrectorComponent w0 = periodic_corrector(a, 0);
    const CorrectorComponent w1 = periodic_corrector(a, 1);
    const HomogenizedTensor t = homogenized_tensor(a, {w0, w1});
    Json j = to_json(t);
    j["harmonic_mean"] = 2.0 * alpha * beta / (alpha + beta);
    j["arithmetic_mean"] = 0.5 * (alpha + beta);
    return j;
}

Json run_gns_suite(const ScenarioConfig& cfg, std::map<std::string, std::string>&) {
    const int half = cfg.params.at("half_extent").get<int>();
    const int n = cfg.params.at("resolution").get<int>();
    const double p = cfg.params.at("p").get<double>();
    const std::vector<ScalarField> family = gns_family(half, n);
    Json members = Json::array();
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const GnsReport r = gns_verify(family[i], p);
        Json m = to_json(r);
        m["member"] = static_cast<int>(i);
        members.push_back(m);
        if (!r.zero_over_zero) max_ratio = std::max(max_ratio, r.ratio);
    }
    Json j;
    j["p"] = p;
    j["members"] = members;
    j["max_ratio"] = max_ratio;
    return j;
}

Json run_cesaro_extract(const ScenarioConfig& cfg, std::map<std::string, std::string>&) {
    const int half = cfg.params.at("half_extent").get<int>();
    const int n = cfg.params.at("resolution").get<int>();
    const int n_max = cfg.params.at("n_max").get<int>();
    const double p = cfg.params.at("p").get<double>();
    const double amp = cfg.params.at("bump_amplitude").get<double>();
    const double decay = cfg.params.at("bump_decay").get<double>();

    const Grid g = Grid::centered_box(2, half, n);
    const BumpSpec bump{amp, 1.0, decay, {0.0, 0.0}};
    ScalarField f(g);
    for (int j1 = 0; j1 < g.cells[1]; ++j1)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j1);
            f.at(i, j1) = 2.0 + std::sin(kTwoPiS * x[0]) + bump.eval(x, 2);
        }
    const Decomposition dec = cesaro_periodic_part(f, n_max, p);
    return to_json(dec);
}

/// Zero-mean radial perturbation ã(r) = amp/(1+r²)² − (amp/4)/(1+r²/4)²; the
/// two bumps carry equal mass, so the defect corrector has no dipole far
/// field and the R vs R/2 truncation check converges.
double zero_mean_bump(double amp, double r2) {
    return amp * std::pow(1.0 + r2, -2.0) - 0.25 * amp * std::pow(1.0 + 0.25 * r2, -2.0);
}

Json run_defect_corrector(const ScenarioConfig& cfg, std::map<std::string, std::string>&) {
    const int half = cfg.params.at("half_extent").get<int>();
    const int n = cfg.params.at("resolution").get<int>();
    const double amp = cfg.params.at("amplitude").get<double>();
    const double p = cfg.params.at("p").get<double>();
    const double r_inner = cfg.params.at("r_inner").get<double>();
    const double tol = cfg.params.at("tol").get<double>();

    const CoefficientSpec per_spec =
        CoefficientSpec::periodic_trig(2.0, {TrigTerm{0.5, {1, 0}, 0.0}}, 1.5);
    const MatrixField a_per = sample_field(per_spec, Grid::unit_cell(2, n));
    const CorrectorComponent w0 = periodic_corrector(a_per, 0);
    const Grid box = Grid::centered_box(2, half, n);

    const MatrixField a_per_box = wrap_matrix_onto(a_per, box);
    MatrixField a_tilde(box);
    MatrixField a_full(box);
    for (int j1 = 0; j1 < box.cells[1]; ++j1)
        for (int i = 0; i < box.cells[0]; ++i) {
            const auto idx = box.index(i, j1);
            const Vec2 x = box.cell_center(i, j1);
            const double t = zero_mean_bump(amp, x[0] * x[0] + x[1] * x[1]);
            a_tilde.set(idx, SymMat::scalar(2, t));
            const SymMat ap = a_per_box.at(idx);
            a_full.set(idx, SymMat{ap.a00 + t, ap.a11 + t, ap.a01});
        }
    const DefectCorrector dc = defect_corrector_direct(a_full, a_per, w0, 0, r_inner, p);

    // fixed-point variant on the same box
    VectorField rhs(box);
    {
        const int ncell = n;
        const auto wrap = [ncell](int v) { return ((v % ncell) + ncell) % ncell; };
        const int base0 = static_cast<int>(std::llround(-box.origin[0] / box.spacing()));
        const int base1 = static_cast<int>(std::llround(-box.origin[1] / box.spacing()));
        for (int j1 = 0; j1 < box.cells[1]; ++j1)
            for (int i = 0; i < box.cells[0]; ++i) {
                const auto idx = static_cast<std::size_t>(box.index(i, j1));
                const auto pidx = static_cast<std::size_t>(
                    a_per.grid.index(wrap(i - base0), wrap(j1 - base1)));
                const SymMat at = a_tilde.at(static_cast<std::int64_t>(idx));
                const double v0 = w0.grad_w.comp[0][pidx] + 1.0;
                const double v1 = w0.grad_w.comp[1][pidx];
                rhs.comp[0][idx] = at.a00 * v0 + at.a01 * v1;
                rhs.comp[1][idx] = at.a01 * v0 + at.a11 * v1;
            }
    }
    const FixedPointResult fp = defect_corrector_fixed_point(a_per_box, a_tilde, rhs, tol);

    Json j;
    j["direct"] = to_json(dc);
    j["fixed_point"] = to_json(fp);
    return j;
}

Json run_rate_sweep_1d(const ScenarioConfig& cfg,
                       std::map<std::string, std::string>& files) {
    std::vector<double> eps_list;
    for (const auto& e : cfg.params.at("eps_list")) eps_list.push_back(e.get<double>());
    const double p = cfg.params.at("p").get<double>();
    const double alpha = cfg.params.at("alpha").get<double>();
    const CoefficientSpec spec =
        CoefficientSpec::periodic_trig(2.0, {TrigTerm{1.0, {1, 0}, 0.0}}, 1.0);
    const SweepReport rep = rate_sweep_1d(
        spec, [](double) { return 1.0; }, eps_list, p, alpha, cfg.jobs);
    files["sweep.csv"] = sweep_csv(rep);
    files["sweep_plot.dat"] = sweep_plot_data(rep);
    return to_json(rep);
}

Json run_counterexample_1d(const ScenarioConfig& cfg,
                           std::map<std::string, std::string>& files) {
    const double y = cfg.params.at("y").get<double>();
    const double fv = cfg.params.at("f_value").get<double>();
    std::vector<int> n_list;
    for (const auto& e : cfg.params.at("n_list")) n_list.push_back(e.get<int>());
    const SubsequenceReport rep =
        counterexample_1d(n_list, [fv](double) { return fv; }, y);
    files["subsequence.csv"] = subsequence_csv(rep);
    return to_json(rep);
}

Json run_counterexample_2d(const ScenarioConfig& cfg,
                           std::map<std::string, std::string>& files) {
    const double fv = cfg.params.at("f_value").get<double>();
    const int cpu = cfg.params.at("cells_per_unit").get<int>();
    std::vector<int> n_list;
    for (const auto& e : cfg.params.at("n_list")) n_list.push_back(e.get<int>());
    const Counterexample2DResult res = counterexample_2d(n_list, fv, cpu);
    files["branch1.csv"] = subsequence_csv(res.branch1);
    files["branch2.csv"] = subsequence_csv(res.branch2);
    return to_json(res);
}

const std::map<std::string, ScenarioEntry>& registry() {
    static const std::map<std::string, ScenarioEntry> reg = [] {
        std::map<std::string, ScenarioEntry> r;
        r["cesaro-extract"] = {
            "Cesàro periodic-part extraction of a bump-perturbed periodic coefficient",
            Json{{"half_extent", 8}, {"resolution", 8}, {"n_max", 6}, {"p", 1.5},
                 {"bump_amplitude", 0.5}, {"bump_decay", 2.0}},
            run_cesaro_extract};
        r["counterexample-1d"] = {
            "1-d log-oscillating coefficient: distinct subsequence limits on (1,2)",
            Json{{"y", 0.0}, {"n_list", Json::array({1, 2, 3})}, {"f_value", 1.0}},
            run_counterexample_1d};
        r["counterexample-2d"] = {
            "2-d iterated-log coefficient on the annulus: two constant limits",
            Json{{"n_list", Json::array({1, 2})}, {"f_value", 1.0},
                 {"cells_per_unit", 32}},
            run_counterexample_2d};
        r["defect-corrector"] = {
            "defect corrector for a localized coefficient perturbation (direct + fixed point)",
            Json{{"half_extent", 16}, {"resolution", 8}, {"amplitude", 0.2}, {"p", 1.5},
                 {"r_inner", 4.0}, {"tol", 1e-8}},
            run_defect_corrector};
        r["gns-suite"] = {
            "discrete Sobolev-inequality ratios over the 12-member test family",
            Json{{"half_extent", 8}, {"resolution", 8}, {"p", 1.5}}, run_gns_suite};
        r["harmonic-1d"] = {
            "1-d periodic cell problem: effective coefficient of 2 + sin(2πx)",
            Json{{"resolution", 512}}, run_harmonic_1d};
        r["laminate-2d"] = {
            "2-d laminate cell problem: harmonic/arithmetic effective tensor",
            Json{{"resolution", 128}, {"alpha", 1.0}, {"beta", 3.0}}, run_laminate_2d};
        r["rate-sweep-1d"] = {
            "1-d ε-sweep with first-order corrector remainder and log-log rate fits",
            Json{{"eps_list", Json::array({0.125, 0.0625, 0.03125, 0.015625,
                                           0.0078125, 0.00390625})},
                 {"p", 0.4}, {"alpha", 0.5}},
            run_rate_sweep_1d};
        return r;
    }();
    return reg;
}

void check_params(const Json& defaults, const Json& user) {
    if (!user.is_object()) throw ConfigInvalid("params must be a JSON object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        if (!defaults.contains(it.key()))
            throw ConfigInvalid("unknown parameter: " + it.key());
        const Json& d = defaults.at(it.key());
        const Json& v = it.value();
        const bool d_num = d.is_number();
        const bool v_num = v.is_number();
        if (d_num != v_num || d.is_array() != v.is_array() ||
            d.is_string() != v.is_string())
            throw ConfigInvalid("parameter type mismatch: " + it.key());
    }
}

} // namespace

std::vector<ScenarioInfo> list_scenarios(const std::string& filter) {
    std::vector<ScenarioInfo> out;
    for (const auto& [name, entry] : registry())
        if (filter.empty() || name.find(filter) != std::string::npos)
            out.push_back({name, entry.description});
    return out;
}

Json scenario_defaults(const std::string& name) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ScenarioUnknown("unknown scenario: " + name);
    return it->second.defaults;
}

std::vector<std::string> scenario_registry_names() {
    std::vector<std::string> out;
    for (const auto& [name, entry] : registry()) out.push_back(name);
    return out;
}

ScenarioConfig parse_config_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigInvalid("config root must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        if (k != "scenario" && k != "output_dir" && k != "jobs" && k != "params")
            throw ConfigInvalid("unknown config key: " + k);
    }
    if (!doc.contains("scenario") || !doc.at("scenario").is_string())
        throw ConfigInvalid("config must name a scenario (string key 'scenario')");

    ScenarioConfig cfg;
    cfg.scenario = doc.at("scenario").get<std::string>();
    cfg.params = scenario_defaults(cfg.scenario);
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string())
            throw ConfigInvalid("output_dir must be a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }
    if (doc.contains("jobs")) {
        if (!doc.at("jobs").is_number_integer() || doc.at("jobs").get<int>() < 1)
            throw ConfigInvalid("jobs must be a positive integer");
        cfg.jobs = doc.at("jobs").get<int>();
    }
    if (doc.contains("params")) {
        check_params(cfg.params, doc.at("params"));
        for (auto it = doc.at("params").begin(); it != doc.at("params").end(); ++it)
            cfg.params[it.key()] = it.value();
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot read config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

Json run_scenario(const ScenarioConfig& cfg) {
    const auto it = registry().find(cfg.scenario);
    if (it == registry().end())
        throw ScenarioUnknown("unknown scenario: " + cfg.scenario);

    ScenarioConfig resolved = cfg;
    if (const char* env = std::getenv("HOMOGLAB_OUT"); env != nullptr && *env != '\0')
        resolved.output_dir = env;

    std::map<std::string, std::string> files;
    const Json result = it->second.run(resolved, files);

    Json summary;
    summary["config"] = Json{{"scenario", resolved.scenario},
                             {"output_dir", resolved.output_dir},
                             {"jobs", resolved.jobs},
                             {"params", resolved.params}};
    summary["result"] = result;

    std::error_code ec;
    std::filesystem::create_directories(resolved.output_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + resolved.output_dir);
    write_text_file(resolved.output_dir + "/summary.json", dump_json(summary));
    for (const auto& [name, content] : files)
        write_text_file(resolved.output_dir + "/" + name, content);
    return summary;
}

ScalarField gns_shape(int shape, Vec2 shift, double dilate, int half, int n) {
    if (shape < 0 || shape > 3) throw ConfigInvalid("gns_shape: shape must be 0..3");
    if (!(dilate > 0.0)) throw ConfigInvalid("gns_shape: dilate must be positive");
    const Grid g = Grid::centered_box(2, half, n);
    ScalarField f(g);
    for (int j1 = 0; j1 < g.cells[1]; ++j1)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 c = g.cell_center(i, j1);
            const double x0 = (c[0] - shift[0]) / dilate;
            const double x1 = (c[1] - shift[1]) / dilate;
            const double r2 = x0 * x0 + x1 * x1;
            // bump shapes carry a C¹ cutoff at radius 4 so every member has
            // compact support: translates inside the box are then exact
            // sample shifts and the ratio is translation-invariant.
            const double cut = std::max(0.0, 1.0 - r2 / 16.0);
            double v = 0.0;
            switch (shape) {
                case 0: v = std::max(0.0, 1.0 - 0.5 * std::max(std::fabs(x0), std::fabs(x1))); break;
                case 1: v = std::max(0.0, 1.0 - 0.5 * std::sqrt(r2)); break;
                case 2: v = cut * cut / (1.0 + r2); break;
                default: v = cut * cut * std::pow(1.0 + r2, -1.5); break;
            }
            f.at(i, j1) = v;
        }
    return f;
}

std::vector<ScalarField> gns_family(int half, int n) {
    std::vector<ScalarField> out;
    out.reserve(12);
    for (int shape = 0; shape < 4; ++shape) {
        out.push_back(gns_shape(shape, {0.0, 0.0}, 1.0, half, n));
        out.push_back(gns_shape(shape, {1.0, 1.0}, 1.0, half, n));
        out.push_back(gns_shape(shape, {0.0, 0.0}, 0.5, half, n));
    }
    return out;
}

} // namespace homoglab
