#include "marx/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "marx/version.hpp"

namespace marx::io {

using nlohmann::json;

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json spec_json(const DesignSpec& spec) {
    return json{{"n", spec.n}, {"alpha", spec.alpha}, {"c", spec.c}, {"ell", spec.ell}};
}

DesignSpec spec_from_json(const json& j) {
    DesignSpec spec;
    spec.n = j.at("n").get<int>();
    spec.alpha = j.at("alpha").get<std::vector<int>>();
    spec.c = j.value("c", 1.0);
    spec.ell = j.value("ell", 1.0);
    spec.validate();
    return spec;
}

json manifest_block(const Manifest& m) {
    return json{{"tool", m.tool},
                {"version", m.version},
                {"seed", m.seed},
                {"spec", spec_json(m.spec)},
                {"timestamp", m.timestamp}};
}

std::string csv_manifest_comment(const Manifest& m) {
    std::ostringstream out;
    out << "# tool=" << m.tool << " version=" << m.version << " seed=" << m.seed
        << " n=" << m.spec.n << " alpha=";
    for (std::size_t i = 0; i < m.spec.alpha.size(); ++i)
        out << (i ? "," : "") << m.spec.alpha[i];
    out << " c=" << g17(m.spec.c) << " ell=" << g17(m.spec.ell)
        << " timestamp=" << m.timestamp << "\n";
    return out.str();
}

json solution_json(const DesignSolution& sol, std::size_t index) {
    auto vec = [](const Vector& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    return json{{"index", index},
                {"k", vec(sol.k)},
                {"f", vec(sol.f)},
                {"scaled", vec(sol.scaled)},
                {"residual_inf", sol.residual_inf},
                {"eig_error", sol.eig_error},
                {"condition", sol.condition},
                {"valid", sol.valid},
                {"regular", sol.regular}};
}

json stats_json(const PathStats& s) {
    return json{{"tracked", s.tracked},
                {"converged", s.converged},
                {"diverged", s.diverged},
                {"failed", s.failed},
                {"complex", s.complex_endpoints},
                {"real", s.real_endpoints}};
}

} // namespace

Manifest Manifest::make(const DesignSpec& spec, std::uint64_t seed) {
    Manifest m;
    m.tool = kToolName;
    m.version = kVersion;
    m.seed = seed;
    m.spec = spec;
    m.timestamp = iso_utc_now();
    return m;
}

std::string manifest_json_text(const Manifest& m) {
    return manifest_block(m).dump(2) + "\n";
}

std::string solution_set_json(const SolutionSet& set, const Manifest& m) {
    json j;
    j["manifest"] = manifest_block(m);
    j["complete"] = set.complete;
    j["path_stats"] = stats_json(set.path_stats);
    j["solutions"] = json::array();
    for (std::size_t i = 0; i < set.solutions.size(); ++i)
        j["solutions"].push_back(solution_json(set.solutions[i], i));
    return j.dump(2) + "\n";
}

std::string solution_set_csv(const SolutionSet& set, const Manifest& m) {
    std::ostringstream out;
    out << csv_manifest_comment(m);
    out << "index";
    for (int i = 1; i <= set.spec.n; ++i) out << ",scaled_" << i;
    out << ",condition,regular,residual_inf\n";
    for (std::size_t i = 0; i < set.solutions.size(); ++i) {
        const auto& sol = set.solutions[i];
        out << i;
        for (int v = 0; v < set.spec.n; ++v) out << "," << g17(sol.scaled[v]);
        out << "," << g17(sol.condition) << "," << (sol.regular ? 1 : 0) << ","
            << g17(sol.residual_inf) << "\n";
    }
    return out.str();
}

std::string solutions_subset_json(const SolutionSet& set,
                                  const std::vector<std::size_t>& indices,
                                  const Manifest& m) {
    json j;
    j["manifest"] = manifest_block(m);
    j["indices"] = indices;
    j["solutions"] = json::array();
    for (std::size_t idx : indices)
        j["solutions"].push_back(solution_json(set.solutions[idx], idx));
    return j.dump(2) + "\n";
}

SolutionFile read_solution_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file: " + path.string());
    json j = json::parse(in);

    SolutionFile file;
    if (j.contains("manifest"))
        file.spec = spec_from_json(j.at("manifest").at("spec"));
    else if (j.contains("spec"))
        file.spec = spec_from_json(j.at("spec"));
    else
        throw std::runtime_error("solution file lacks a spec block");

    auto push_k = [&](const std::vector<double>& k) {
        file.k_vectors.push_back(
            Eigen::Map<const Vector>(k.data(), static_cast<Eigen::Index>(k.size())));
    };
    if (j.contains("solutions")) {
        for (const auto& s : j.at("solutions")) push_k(s.at("k").get<std::vector<double>>());
    } else if (j.contains("k")) {
        push_k(j.at("k").get<std::vector<double>>());
    } else {
        throw std::runtime_error("solution file lacks k data");
    }
    return file;
}

std::string trace_csv(const SimTrace& trace, const Manifest& m) {
    const int n = trace.spec.n;
    std::ostringstream out;
    out << csv_manifest_comment(m);
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",v_c" << i;
    for (int i = 1; i <= n + 1; ++i) out << ",v_" << i;
    for (int i = 1; i <= n; ++i) out << ",i_" << i;
    out << ",i_L,v_L,energy\n";
    for (Eigen::Index r = 0; r < trace.times.size(); ++r) {
        out << g17(trace.times[r]);
        for (Eigen::Index c = 0; c < trace.states.cols(); ++c)
            out << "," << g17(trace.states(r, c));
        out << "," << g17(trace.v_load[r]) << "," << g17(trace.energy[r]) << "\n";
    }
    return out.str();
}

std::string trace_json(const SimTrace& trace, const Manifest& m) {
    json j;
    j["manifest"] = manifest_block(m);
    j["v0"] = trace.v0;
    j["times"] = std::vector<double>(trace.times.data(),
                                     trace.times.data() + trace.times.size());
    j["states"] = json::array();
    for (Eigen::Index r = 0; r < trace.states.rows(); ++r) {
        std::vector<double> row(trace.states.cols());
        for (Eigen::Index c = 0; c < trace.states.cols(); ++c) row[c] = trace.states(r, c);
        j["states"].push_back(row);
    }
    j["v_load"] = std::vector<double>(trace.v_load.data(),
                                      trace.v_load.data() + trace.v_load.size());
    j["energy"] = std::vector<double>(trace.energy.data(),
                                      trace.energy.data() + trace.energy.size());
    return j.dump(2) + "\n";
}

std::string grid_csv(const PseudospectrumGrid& grid, const Manifest& m) {
    std::ostringstream out;
    out << csv_manifest_comment(m);
    out << "re,im,sigma_min\n";
    for (std::size_t r = 0; r < grid.im.size(); ++r)
        for (std::size_t c = 0; c < grid.re.size(); ++c)
            out << g17(grid.re[c]) << "," << g17(grid.im[r]) << ","
                << g17(grid.sigma_min(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(c)))
                << "\n";
    return out.str();
}

std::string grid_json(const PseudospectrumGrid& grid, const Manifest& m) {
    json j;
    j["manifest"] = manifest_block(m);
    j["re"] = grid.re;
    j["im"] = grid.im;
    j["epsilons"] = grid.epsilons;
    j["sigma_min"] = json::array();
    for (Eigen::Index r = 0; r < grid.sigma_min.rows(); ++r) {
        std::vector<double> row(grid.sigma_min.cols());
        for (Eigen::Index c = 0; c < grid.sigma_min.cols(); ++c)
            row[c] = grid.sigma_min(r, c);
        j["sigma_min"].push_back(row);
    }
    return j.dump(2) + "\n";
}

std::string sensitivity_json(const std::vector<SensitivityReport>& reports,
                             const Manifest& m) {
    json j;
    j["manifest"] = manifest_block(m);
    j["reports"] = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i)
        j["reports"].push_back(json{{"index", i},
                                    {"eigenvalues", reports[i].eigenvalues},
                                    {"conditions", reports[i].conditions},
                                    {"max_condition", reports[i].max_condition}});
    return j.dump(2) + "\n";
}

std::string sensitivity_csv(const std::vector<SensitivityReport>& reports,
                            const Manifest& m) {
    std::ostringstream out;
    out << csv_manifest_comment(m);
    out << "index,max_condition\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
        out << i << "," << g17(reports[i].max_condition) << "\n";
    return out.str();
}

std::string polysystem_json(const PolySystem& system) {
    json j;
    j["formulation"] = system.formulation == Formulation::K_FORM ? "K_FORM" : "F_FORM";
    j["variables"] = system.nvars();
    j["spec"] = spec_json(system.spec);
    j["polynomials"] = json::array();
    for (const auto& poly : system.polys) {
        json terms = json::array();
        for (const auto& [e, c] : poly.terms())
            terms.push_back(json::array({e, rational_to_string(c)}));
        j["polynomials"].push_back(terms);
    }
    return j.dump(2) + "\n";
}

PolySystem parse_polysystem(const std::string& json_text) {
    const json j = json::parse(json_text);
    PolySystem system;
    system.formulation = j.at("formulation").get<std::string>() == "K_FORM"
                             ? Formulation::K_FORM
                             : Formulation::F_FORM;
    system.spec = spec_from_json(j.at("spec"));
    const int nvars = j.at("variables").get<int>();
    for (const auto& terms : j.at("polynomials")) {
        RationalPolynomial poly(nvars);
        for (const auto& term : terms)
            poly.add_term(term.at(0).get<std::vector<int>>(),
                          parse_rational(term.at(1).get<std::string>()));
        system.polys.push_back(std::move(poly));
    }
    return system;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

} // namespace marx::io
