#pragma once

// Command-line driver: reads .form files, runs one analysis and prints a
// report (json by default, or text) on the output stream. Diagnostics go to
// the error stream only.
//
// Exit codes: 0 analysis ran (whatever the verdicts), 1 usage error,
// 2 parse error, 3 semantic error.

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "exform/exform.hpp"

namespace exform::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kSemantic = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A name given with --form/--map/--metric/--torsion that the file does not declare.
class MissingName : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string command;
    std::vector<std::string> files;
    std::vector<std::string> forms;
    std::optional<std::string> metric;
    std::optional<std::string> map;
    std::optional<std::string> torsion;
    std::optional<int> exponent_bound;
    std::string format = "json";
    std::string psi = "psi";
    std::string pairs;
    std::string cv = "3/2";
    std::string R = "1";
    std::optional<int> n;
};

struct Input {
    std::string path;
    std::string text;
    dsl::Document doc;
};

namespace detail {

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

inline Rational parse_rational(const std::string& text, const char* what) {
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0)
        throw UsageError(std::string("invalid rational for ") + what + ": '" + text + "'");
    q.canonicalize();
    return q;
}

inline json rendered(const DifferentialForm& w, const std::string& name) { return dsl::render(w, name); }

inline json matrix(const CommutatorMatrix& K) {
    json rows = json::array();
    for (const auto& row : K) {
        json r = json::array();
        for (const auto& c : row) r.push_back(c.str());
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Nonzero upper-triangle entries K[i][j], i < j.
inline json commutator_entries(const CommutatorMatrix& K, const Variables& vars) {
    json out = json::array();
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = i + 1; j < K.size(); ++j)
            if (!K[i][j].is_zero()) out.push_back({{"i", vars[i]}, {"j", vars[j]}, {"value", K[i][j].str()}});
    return out;
}

inline json variables(const Variables& vars) {
    json a = json::array();
    for (const auto& v : vars) a.push_back(v);
    return a;
}

inline json form_entry(const Input& in, const dsl::FormDecl& f) {
    return {{"file", in.path},
            {"form", f.name},
            {"degree", f.form.degree()},
            {"variables", variables(f.form.variables())},
            {"input", dsl::render(f.form, f.name)}};
}

inline json point(const std::map<std::string, Rational>& pt) {
    json o = json::object();
    for (const auto& [k, v] : pt) o[k] = to_string(v);
    return o;
}

inline std::vector<const dsl::FormDecl*> selected_forms(const Input& in, const Options& opt) {
    if (opt.forms.empty()) return in.doc.forms();
    std::vector<const dsl::FormDecl*> out;
    for (const auto& name : opt.forms) {
        const auto* f = in.doc.find_form(name);
        if (!f) throw MissingName(in.path + ": no form named '" + name + "'");
        out.push_back(f);
    }
    return out;
}

inline DiagonalMetric required_metric(const Input& in, const Options& opt) {
    if (!opt.metric) throw UsageError("'" + opt.command + "' needs --metric NAME");
    const auto* m = in.doc.find_metric(*opt.metric);
    if (!m) throw MissingName(in.path + ": no metric named '" + *opt.metric + "'");
    return m->metric;
}

inline std::optional<DiagonalMetric> optional_metric(const Input& in, const Options& opt) {
    if (!opt.metric) return std::nullopt;
    return required_metric(in, opt);
}

inline const dsl::MapDecl& required_map(const Input& in, const Options& opt) {
    if (!opt.map) throw UsageError("'" + opt.command + "' needs --map NAME");
    const auto* m = in.doc.find_map(*opt.map);
    if (!m) throw MissingName(in.path + ": no map named '" + *opt.map + "'");
    return *m;
}

inline std::optional<StructureCoefficients> optional_torsion(const Input& in, const Options& opt) {
    if (!opt.torsion) return std::nullopt;
    auto t = in.doc.torsion(*opt.torsion);
    if (!t) throw MissingName(in.path + ": no torsion named '" + *opt.torsion + "'");
    return t;
}

inline json map_json(const dsl::MapDecl& m) {
    return {{"name", m.name}, {"source", variables(m.map.source)}, {"target", variables(m.map.target)},
            {"text", dsl::render(m)}};
}

inline json closure_json(const ClosureReport& r, const std::string& name) {
    json o;
    o["closed"] = r.closed;
    o["differential"] = rendered(r.differential, "d_" + name);
    o["exact"] = to_string(r.exact);
    o["witness"] = r.witness ? json(rendered(*r.witness, "theta_" + name)) : json(nullptr);
    o["exactness_reason"] = r.exactness_reason;
    o["classification"] = to_string(r.classification);
    if (r.dual_closed) {
        o["dual_closed"] = *r.dual_closed;
        o["dual_residual"] = rendered(*r.dual_residual, "d_star_" + name);
    }
    if (r.pseudostructure_dim) o["pseudostructure_dim"] = *r.pseudostructure_dim;
    return o;
}

inline json relation_json(const EvolutionaryRelation& rel, const std::string& name) {
    return {{"psi", rel.psi},
            {"degree", rel.degree()},
            {"omega", rendered(rel.omega, name)},
            {"text", "d" + rel.psi + " = " + dsl::render_terms(rel.omega)}};
}

inline int exponent_bound(const Options& opt) {
    if (opt.exponent_bound) return *opt.exponent_bound;
    if (const char* env = std::getenv("EXFORM_EXPONENT_BOUND")) {
        try {
            std::size_t used = 0;
            int v = std::stoi(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("invalid EXFORM_EXPONENT_BOUND '") + env + "'");
    }
    return kDefaultExponentBound;
}

inline json factor_json(const IntegratingFactorResult& f, const DifferentialForm& w, const std::string& name) {
    json o;
    o["outcome"] = to_string(f.outcome);
    o["factor"] = f.factor ? json(f.factor->str()) : json(nullptr);
    o["stage"] = f.stage;
    o["reason"] = f.reason;
    if (f.factor) {
        DifferentialForm mw = *f.factor * w;
        o["factored_form"] = rendered(mw, "mu_" + name);
        o["factored_differential"] = rendered(exterior_derivative(mw), "d_mu_" + name);
    }
    return o;
}

// -- per-file subcommands ----------------------------------------------------

inline json run_file(const std::string& cmd, const Input& in, const Options& opt) {
    json results = json::array();
    auto each_form = [&](auto&& fn) {
        for (const auto* f : selected_forms(in, opt)) {
            json e = form_entry(in, *f);
            fn(*f, e);
            results.push_back(std::move(e));
        }
    };

    if (cmd == "analyze") {
        auto g = optional_metric(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            e.update(closure_json(classify_form(f.form, g), f.name));
            if (f.form.degree() == 1) {
                auto K = commutator(f.form);
                e["commutator"] = matrix(K);
                e["commutator_entries"] = commutator_entries(K, f.form.variables());
            }
        });
    } else if (cmd == "d") {
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["result"] = rendered(exterior_derivative(f.form), "d_" + f.name);
        });
    } else if (cmd == "wedge") {
        auto forms = selected_forms(in, opt);
        if (forms.size() < 2) throw UsageError("wedge needs at least two forms");
        DifferentialForm acc = forms.front()->form;
        std::string name = forms.front()->name;
        json operands = json::array();
        operands.push_back(forms.front()->name);
        for (std::size_t i = 1; i < forms.size(); ++i) {
            acc = wedge(acc, forms[i]->form);
            name += "_" + forms[i]->name;
            operands.push_back(forms[i]->name);
        }
        results.push_back({{"file", in.path},
                           {"operands", operands},
                           {"variables", variables(acc.variables())},
                           {"result", rendered(acc, name)}});
    } else if (cmd == "star") {
        auto g = required_metric(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["metric"] = *opt.metric;
            e["result"] = rendered(hodge_star(f.form, g), "star_" + f.name);
        });
    } else if (cmd == "delta") {
        auto g = required_metric(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["metric"] = *opt.metric;
            e["convention"] = "delta = (-1)^(n(p+1)+1) sgn(g) *d*";
            e["result"] = rendered(codifferential(f.form, g), "delta_" + f.name);
        });
    } else if (cmd == "laplace") {
        auto g = required_metric(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["metric"] = *opt.metric;
            e["convention"] = "d delta + delta d";
            e["result"] = rendered(laplace_de_rham(f.form, g), "laplace_" + f.name);
            e["difference_variant"] = rendered(laplace_difference_variant(f.form, g), "laplace_diff_" + f.name);
        });
    } else if (cmd == "commutator") {
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto K = commutator(f.form);
            e["commutator"] = matrix(K);
            e["commutator_entries"] = commutator_entries(K, f.form.variables());
            e["zero"] = is_closed(f.form).closed;
        });
    } else if (cmd == "pullback") {
        const auto& m = required_map(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto r = restrict_and_test(f.form, m.map);
            e["map"] = map_json(m);
            e["result"] = rendered(pullback(m.map, f.form), "pi_" + f.name);
            e.update(closure_json(r, "pi_" + f.name));
        });
    } else if (cmd == "witness") {
        each_form([&](const dsl::FormDecl& f, json& e) {
            json w;
            try {
                w["exact"] = "yes";
                w["witness"] = rendered(exactness_witness(f.form), "theta_" + f.name);
                w["reason"] = "";
            } catch (const NotClosed& ex) {
                w["exact"] = "no";
                w["witness"] = nullptr;
                w["reason"] = ex.message();
            } catch (const WitnessUndecided& ex) {
                w["exact"] = "undecided";
                w["witness"] = nullptr;
                w["reason"] = ex.message();
            }
            e.update(w);
        });
    } else if (cmd == "evolve") {
        auto T = optional_torsion(in, opt).value_or(StructureCoefficients{});
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["torsion"] = opt.torsion ? json(*opt.torsion) : json(nullptr);
            e["result"] = rendered(evolutionary_differential(f.form, T), "dev_" + f.name);
        });
    } else if (cmd == "relation") {
        auto T = optional_torsion(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto rel = build_evolutionary_relation(opt.psi, f.form);
            auto rep = nonidentity_report(rel, T);
            e["relation"] = relation_json(rel, f.name);
            e["torsion"] = opt.torsion ? json(*opt.torsion) : json(nullptr);
            e["identical"] = rep.identical;
            e["internal_force_measure"] = rendered(rep.internal_force_measure, "K_" + f.name);
            if (rep.commutator) {
                e["commutator"] = matrix(*rep.commutator);
                e["commutator_entries"] = commutator_entries(*rep.commutator, f.form.variables());
            }
        });
    } else if (cmd == "factor") {
        const int E = exponent_bound(opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            e["exponent_bound"] = E;
            e["frobenius"] = frobenius_test(f.form);
            e.update(factor_json(integrating_factor_search(f.form, E), f.form, f.name));
        });
    } else if (cmd == "descent") {
        const auto& m = required_map(in, opt);
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto res = degree_descent(build_evolutionary_relation(opt.psi, f.form), m.map);
            e["map"] = map_json(m);
            e["outcome"] = to_string(res.outcome);
            e["restricted"] = rendered(res.restricted, "pi_" + f.name);
            e["residual"] = rendered(res.residual, "d_pi_" + f.name);
            if (res.identical) {
                e["identical_relation"] = "d_pi " + opt.psi + " = d_pi(" + dsl::render_terms(res.identical->theta) + ")";
                e["theta"] = rendered(res.identical->theta, "theta_" + f.name);
                e["next_relation"] = relation_json(*res.next, "theta_" + f.name);
            } else {
                e["identical_relation"] = nullptr;
                e["theta"] = nullptr;
                e["next_relation"] = nullptr;
            }
            e["reason"] = res.reason;
        });
    } else if (cmd == "jacobian") {
        const auto& m = required_map(in, opt);
        auto rep = jacobian_determinant(m.map);
        json pts = json::array();
        for (const auto& p : rep.vanishing_points) pts.push_back(point(p));
        results.push_back({{"file", in.path},
                           {"map", map_json(m)},
                           {"determinant", rep.determinant.str()},
                           {"identically_zero", rep.identically_zero},
                           {"grid", "{-2, -1, -1/2, 0, 1/2, 1, 2}"},
                           {"vanishing_points", pts},
                           {"truncated", rep.truncated}});
    } else if (cmd == "poisson") {
        auto forms = selected_forms(in, opt);
        if (forms.size() != 2) throw UsageError("poisson needs exactly two --form arguments");
        if (opt.pairs.empty()) throw UsageError("poisson needs --pairs q1:p1[,q2:p2...]");
        std::vector<std::pair<std::string, std::string>> pairs;
        std::stringstream ss(opt.pairs);
        std::string item;
        json pj = json::array();
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
                throw UsageError("malformed pair '" + item + "' (expected q:p)");
            pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
            pj.push_back({pairs.back().first, pairs.back().second});
        }
        const auto& vars = forms[0]->form.variables();
        for (const auto& [q, p] : pairs)
            for (const auto& v : {q, p})
                if (std::find(vars.begin(), vars.end(), v) == vars.end())
                    throw UnknownVariable("pair variable '" + v + "' is not declared");
        auto bracket = poisson_bracket(forms[0]->form.scalar_value(), forms[1]->form.scalar_value(), pairs);
        results.push_back({{"file", in.path},
                           {"f", dsl::render(forms[0]->form, forms[0]->name)},
                           {"g", dsl::render(forms[1]->form, forms[1]->name)},
                           {"pairs", pj},
                           {"bracket", bracket.str()}});
    } else if (cmd == "maxwell") {
        DiagonalMetric g = opt.metric ? required_metric(in, opt) : DiagonalMetric::minkowski();
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto r = maxwell_check(f.form, g);
            e["metric"] = opt.metric ? json(*opt.metric) : json("minkowski(+,-,-,-)");
            e["dF"] = rendered(r.dF, "dF");
            e["d_star_F"] = rendered(r.d_star_F, "d_star_F");
            e["satisfied"] = r.satisfied;
        });
    } else if (cmd == "hamilton") {
        each_form([&](const dsl::FormDecl& f, json& e) {
            auto r = poincare_cartan_check(f.form.scalar_value(), f.form.variables());
            json X = json::object();
            for (const auto& v : f.form.variables()) X[v] = r.characteristic.component(v).str();
            e["omega_pc"] = rendered(r.omega_pc, "omega_pc");
            e["d_omega_pc"] = rendered(r.d_omega_pc, "d_omega_pc");
            e["characteristic_field"] = X;
            e["contraction_residual"] = rendered(r.contraction_residual, "residual");
            e["satisfied"] = r.satisfied;
        });
    } else {
        throw UsageError("unknown subcommand '" + cmd + "'");
    }
    return results;
}

inline json run_thermo(const Options& opt) {
    auto r = thermo_demo(parse_rational(opt.cv, "--cv"), parse_rational(opt.R, "--R"), exponent_bound(opt));
    json o;
    o["c_v"] = to_string(r.c_v);
    o["R"] = to_string(r.R);
    o["variables"] = variables(r.heat_form.variables());
    o["heat_form"] = rendered(r.heat_form, "omega_Q");
    o["d_heat_form"] = rendered(r.d_heat_form, "d_omega_Q");
    o["nonidentical"] = r.nonidentical;
    o["commutator_TV"] = r.commutator_TV.str();
    o["integrating_factor"] = r.factor.factor ? json(r.factor.factor->str()) : json(nullptr);
    o["factor_outcome"] = to_string(r.factor.outcome);
    o["factor_stage"] = r.factor.stage;
    o["entropy_form"] = r.entropy_form ? json(rendered(*r.entropy_form, "dS")) : json(nullptr);
    o["d_entropy_form"] = r.d_entropy_form ? json(rendered(*r.d_entropy_form, "d_dS")) : json(nullptr);
    o["identical_after_factor"] = r.identical_after_factor;
    o["entropy_witness"] = to_string(r.entropy_witness);
    o["entropy_witness_form"] = r.entropy_witness_form ? json(rendered(*r.entropy_witness_form, "S")) : json(nullptr);
    o["entropy_witness_reason"] = r.entropy_witness_reason;
    return json::array({o});
}

inline json run_table(const Options& opt) {
    json rows = json::array();
    for (const auto& r : classification_table(opt.n)) {
        rows.push_back({{"p", r.p},
                        {"k", r.k},
                        {"n", r.n},
                        {"interaction", to_string(r.interaction)},
                        {"pseudostructure_dim", r.pseudostructure_dim},
                        {"metric_structure_dim", r.metric_structure_dim},
                        {"element_label", r.element_label},
                        {"sources", r.sources}});
    }
    json cols = json::array();
    for (const auto& c : table_columns())
        cols.push_back({{"n", c.n},
                        {"N", c.metric_structure_dim},
                        {"exact_form_label", c.exact_form_label},
                        {"structure_label", c.structure_label}});
    return json::array({{{"policy", opt.n ? "fixed" : "n-equals-p"}, {"rows", rows}, {"columns", cols}}});
}

// -- text rendering ----------------------------------------------------------

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

inline void text_value(std::ostream& out, const std::string& key, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (v.is_object()) {
        out << pad << key << ":\n";
        for (const auto& [k, x] : v.items()) text_value(out, k, x, indent + 2);
    } else if (v.is_array()) {
        bool flat = std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
        if (flat) {
            out << pad << key << ": [";
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
            out << "]\n";
        } else {
            out << pad << key << ":\n";
            for (std::size_t i = 0; i < v.size(); ++i) text_value(out, "[" + std::to_string(i) + "]", v[i], indent + 2);
        }
    } else {
        out << pad << key << ": " << scalar_text(v) << "\n";
    }
}

inline void table_text(std::ostream& out, const json& table) {
    // grid cell (k, p) -> label
    std::map<std::pair<int, int>, std::string> cell;
    for (const auto& r : table["rows"]) {
        std::string label = r["element_label"].get<std::string>();
        cell[{r["k"].get<int>(), r["p"].get<int>()}] = label.empty() ? "." : label;
    }
    auto col = [](const std::string& s, std::size_t w) { return s + std::string(s.size() < w ? w - s.size() : 1, ' '); };
    out << col("interaction", 17) << col("k\\p", 6);
    for (int p = 0; p <= 3; ++p) out << col(std::to_string(p), 15);
    out << "\n";
    for (int k = 3; k >= 0; --k) {
        out << col(to_string(interaction_for(k)), 17) << col(std::to_string(k), 6);
        for (int p = 0; p <= 3; ++p) {
            auto it = cell.find({k, p});
            out << col(it == cell.end() ? "" : it->second, 15);
        }
        out << "\n";
    }
    out << col("exact forms", 23);
    for (const auto& c : table["columns"]) out << col(c["exact_form_label"].get<std::string>(), 15);
    out << "\n" << col("N", 23);
    for (const auto& c : table["columns"]) out << col(std::to_string(c["N"].get<int>()), 15);
    out << "\n" << col("", 23);
    for (const auto& c : table["columns"]) out << col(c["structure_label"].get<std::string>(), 15);
    out << "\n\n";
    for (const auto& r : table["rows"]) {
        out << "p=" << r["p"].get<int>() << " k=" << r["k"].get<int>() << " n=" << r["n"].get<int>() << "  "
            << col(r["interaction"].get<std::string>(), 16) << "pseudostructure_dim=" << r["pseudostructure_dim"].get<int>()
            << " N=" << r["metric_structure_dim"].get<int>() << "\n";
    }
}

inline void print_text(std::ostream& out, const json& report) {
    out << "exform " << report["tool_version"].get<std::string>() << "\n";
    std::string cmd;
    for (const auto& a : report["command"]) cmd += (cmd.empty() ? "" : " ") + a.get<std::string>();
    out << "command: " << cmd << "\n";
    out << "input_digest: " << report["input_digest"].get<std::string>() << "\n";
    const auto& results = report["results"];
    for (std::size_t i = 0; i < results.size(); ++i) {
        out << "\n== result " << (i + 1) << " ==\n";
        if (report["command"][0] == "table") {
            table_text(out, results[i]);
        } else {
            for (const auto& [k, v] : results[i].items()) text_value(out, k, v, 0);
        }
    }
    out << "\ntiming_ms: " << report["timing_ms"].dump() << "\n";
}

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"analyze", "d",       "wedge",    "star",    "delta",
                                                "laplace", "commutator", "pullback", "witness", "evolve",
                                                "relation", "factor", "descent", "jacobian", "poisson",
                                                "maxwell", "hamilton", "thermo",  "table"};
    return names;
}

inline Input load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Input input{path, ss.str(), {}};
    return input;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    Options opt;
    CLI::App app{"exform: exact exterior-calculus analyses of .form files", "exform"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kVersion);

    for (const auto& name : detail::subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--format", opt.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--exponent-bound", opt.exponent_bound, "integrating-factor exponent bound")
            ->check(CLI::PositiveNumber);
        if (name == "thermo") {
            sub->add_option("--cv", opt.cv, "heat capacity c_v (rational, > 0)");
            sub->add_option("--R", opt.R, "gas constant R (rational, >= 0)");
            continue;
        }
        if (name == "table") {
            sub->add_option("--n", opt.n, "use this space dimension for every row")->check(CLI::NonNegativeNumber);
            continue;
        }
        sub->add_option("files", opt.files, ".form input files")->required();
        sub->add_option("--form", opt.forms, "select forms by name (repeatable)");
        sub->add_option("--metric", opt.metric, "metric declared in the file");
        sub->add_option("--map", opt.map, "map declared in the file");
        sub->add_option("--torsion", opt.torsion, "torsion set declared in the file");
        sub->add_option("--psi", opt.psi, "state functional symbol for relations");
        sub->add_option("--pairs", opt.pairs, "canonical pairs q1:p1,q2:p2 for poisson");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "exform: " << e.what() << "\n";
        return kUsage;
    }
    opt.command = app.get_subcommands().front()->get_name();

    json report;
    std::string where;  // file that raised the first error
    report["tool_version"] = kVersion;
    report["command"] = args;
    try {
        std::vector<Input> inputs;
        std::string digest_data;
        for (const auto& path : opt.files) {
            inputs.push_back(detail::load(path));
            digest_data += inputs.back().text;
        }
        report["input_digest"] = "sha256:" + detail::sha256_hex(digest_data);

        json results = json::array();
        if (opt.command == "thermo") {
            results = detail::run_thermo(opt);
        } else if (opt.command == "table") {
            results = detail::run_table(opt);
        } else {
            // files are independent; collect in argument order
            std::vector<std::future<json>> jobs;
            for (auto& in : inputs) {
                jobs.push_back(std::async(std::launch::async, [&in, &opt]() {
                    in.doc = dsl::parse(in.text);
                    return detail::run_file(opt.command, in, opt);
                }));
            }
            std::vector<json> per_file;
            std::exception_ptr first_error;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                try {
                    per_file.push_back(jobs[i].get());
                } catch (...) {
                    if (!first_error) {
                        first_error = std::current_exception();
                        where = inputs[i].path + ":";
                    }
                }
            }
            if (first_error) std::rethrow_exception(first_error);
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                for (const auto& w : inputs[i].doc.warnings)
                    err << inputs[i].path << ":" << w.location.str() << ": warning: " << w.message << "\n";
                for (auto& r : per_file[i]) results.push_back(std::move(r));
            }
        }
        report["results"] = std::move(results);
    } catch (const UsageError& e) {
        err << "exform: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "exform: " << where << (where.empty() ? "" : " ") << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const Error& e) {
        err << "exform: " << where << (where.empty() ? "" : " ") << "error: " << e.what() << "\n";
        return kSemantic;
    }

    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    report["timing_ms"] = elapsed.count();
    if (opt.format == "text") {
        detail::print_text(out, report);
    } else {
        out << report.dump(2) << "\n";
    }
    return kOk;
}

}  // namespace exform::cli
