#include "homoglab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace homoglab {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad_close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_rec(el, out, indent, depth + 1);
            }
            out += "\n" + pad_close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isnan(v)) {
                out += "\"nan\"";
            } else if (std::isinf(v)) {
                out += v > 0 ? "\"inf\"" : "\"-inf\"";
            } else {
                out += format_double(v);
            }
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

Json json_doubles(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json json_ints(const std::vector<int>& v) {
    Json a = Json::array();
    for (int x : v) a.push_back(x);
    return a;
}

} // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

Json to_json(const NormReport& r) {
    Json j;
    j["p"] = r.p;
    j["p_star"] = r.p_star;
    j["lp_of_delta"] = r.lp_of_delta;
    j["ep_norm"] = r.ep_norm;
    j["ap_norm"] = r.ap_norm;
    j["l2_unif"] = r.l2_unif;
    j["sobolev_part_present"] = r.sobolev_part_present;
    j["delta_domain_cells"] = Json::array({r.delta_domain_cells[0], r.delta_domain_cells[1]});
    j["window_domain_cells"] =
        Json::array({r.window_domain_cells[0], r.window_domain_cells[1]});
    return j;
}

Json to_json(const DecayFit& r) {
    Json j;
    j["radii"] = json_doubles(r.radii);
    j["averaged_values"] = json_doubles(r.averaged_values);
    j["fitted_exponent"] = r.fitted_exponent;
    j["r2"] = r.r2;
    j["degenerate"] = r.degenerate;
    return j;
}

Json to_json(const Decomposition& r) {
    Json j;
    j["n_used"] = r.n_used;
    j["non_convergent"] = r.non_convergent;
    j["gns_ratio"] = r.gns_ratio;
    Json trace = Json::array();
    for (const auto& [n, step] : r.convergence_trace)
        trace.push_back(Json{{"N", n}, {"l1_step", step}});
    j["convergence_trace"] = trace;
    j["periodic_part_cells"] =
        Json::array({r.periodic_part.grid.cells[0], r.periodic_part.grid.cells[1]});
    return j;
}

Json to_json(const GnsReport& r) {
    Json j;
    j["ep_norm_of_difference"] = r.ep_norm_of_difference;
    j["lp_of_delta"] = r.lp_of_delta;
    j["ratio"] = r.ratio;
    j["zero_over_zero"] = r.zero_over_zero;
    j["n_used"] = r.n_used;
    return j;
}

Json to_json(const HomogenizedTensor& r) {
    Json j;
    j["a_star"] = Json{{"a00", r.a_star.a00}, {"a11", r.a_star.a11}, {"a01", r.a_star.a01}};
    j["asymmetry_defect"] = r.asymmetry_defect;
    j["resolution"] = r.resolution;
    return j;
}

Json to_json(const SolveStats& r) {
    Json j;
    j["iterations"] = r.iterations;
    j["rel_residual"] = r.rel_residual;
    j["projected"] = r.projected;
    return j;
}

Json to_json(const DefectCorrector& r) {
    Json j;
    j["ap_report"] = to_json(r.ap_report);
    j["sublinearity"] = to_json(r.sublinearity);
    j["stats"] = to_json(r.stats);
    j["truncation_change"] = r.truncation_change;
    return j;
}

Json to_json(const FixedPointResult& r) {
    Json j;
    j["iterations"] = r.iterations;
    j["increments"] = json_doubles(r.increments);
    j["ratios"] = json_doubles(r.ratios);
    return j;
}

Json to_json(const SweepReport& r) {
    Json j;
    j["eps_list"] = json_doubles(r.eps_list);
    j["err_l2"] = json_doubles(r.err_l2);
    j["err_grad_r"] = json_doubles(r.err_grad_r);
    j["err_grad_lr"] = json_doubles(r.err_grad_lr);
    j["err_grad_plain"] = json_doubles(r.err_grad_plain);
    j["slope_l2"] = r.slope_l2;
    j["r2_l2"] = r.r2_l2;
    j["slope_grad_r"] = r.slope_grad_r;
    j["r2_grad_r"] = r.r2_grad_r;
    j["mu_reference"] = r.mu_reference;
    j["nu_reference"] = r.nu_reference;
    j["p"] = r.p;
    j["r"] = r.r;
    j["alpha"] = r.alpha;
    return j;
}

Json to_json(const SubsequenceReport& r) {
    Json j;
    j["branch_param"] = r.branch_param;
    j["n_list"] = json_ints(r.n_list);
    j["distances"] = json_doubles(r.distances);
    j["limit_norm"] = r.limit_norm;
    j["cross_branch_distance"] = r.cross_branch_distance;
    if (!r.coef_deviation.empty()) j["coef_deviation"] = json_doubles(r.coef_deviation);
    if (!r.perturbation_bound.empty())
        j["perturbation_bound"] = json_doubles(r.perturbation_bound);
    return j;
}

Json to_json(const Counterexample2DResult& r) {
    Json j;
    j["branch1"] = to_json(r.branch1);
    j["branch2"] = to_json(r.branch2);
    j["scaling_identity_error"] = r.scaling_identity_error;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string sweep_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "eps,err_l2,err_grad_r,err_grad_lr,err_grad_plain\n";
    for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
        os << format_double(r.eps_list[i]) << ',' << format_double(r.err_l2[i]) << ','
           << format_double(r.err_grad_r[i]) << ','
           << (i < r.err_grad_lr.size() ? format_double(r.err_grad_lr[i]) : "") << ','
           << (i < r.err_grad_plain.size() ? format_double(r.err_grad_plain[i]) : "")
           << '\n';
    }
    return os.str();
}

std::string subsequence_csv(const SubsequenceReport& r) {
    std::ostringstream os;
    os << "n,distance";
    if (!r.coef_deviation.empty()) os << ",coef_deviation,perturbation_bound";
    os << '\n';
    for (std::size_t i = 0; i < r.n_list.size(); ++i) {
        os << r.n_list[i] << ',' << format_double(r.distances[i]);
        if (!r.coef_deviation.empty())
            os << ',' << format_double(r.coef_deviation[i]) << ','
               << format_double(r.perturbation_bound[i]);
        os << '\n';
    }
    return os.str();
}

std::string sweep_plot_data(const SweepReport& r) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.eps_list.size(); ++i)
        os << format_double(std::log(r.eps_list[i])) << ' '
           << format_double(std::log(r.err_l2[i])) << '\n';
    return os.str();
}

} // namespace homoglab
