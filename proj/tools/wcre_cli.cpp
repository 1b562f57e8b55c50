#include "wcre/empirical.hpp"
#include "wcre/entropy.hpp"
#include "wcre/entropy_multivariate.hpp"
#include "wcre/errors.hpp"
#include "wcre/harness.hpp"
#include "wcre/json_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace wcre;

namespace {

enum Exit { ok = 0, input_error = 1, divergence = 2, quadrature_failure = 3, usage = 64 };

struct Config {
    std::string model, weight, quantity, catalog, sample, sizes, out, format = "json";
    bool use_default = false, experiment = false;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::optional<double> tail_mass, rel_tol;
    std::optional<int> grid;
};

QuadratureSpec spec_of(const Config& c, QuadratureSpec s = {}) {
    if (c.tail_mass) s.tail_mass = *c.tail_mass;
    if (c.rel_tol) s.rel_tol = *c.rel_tol;
    if (c.grid) s.grid_points_per_dim = *c.grid;
    s.validate();
    return s;
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InputError("cannot write '" + c.out + "'");
    f << text << '\n';
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::string reports_csv(const std::vector<CheckReport>& rs) {
    std::ostringstream s;
    s << "check_id,instance_id,verdict,hypothesis_met,lhs,rhs,slack,tolerance\n";
    for (const auto& r : rs)
        s << r.check_id << ',' << r.instance_id << ',' << verdict_name(r.verdict) << ',' << (r.hypothesis_met ? 1 : 0)
          << ',' << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.slack) << ','
          << csv_number(r.tolerance) << '\n';
    return s.str();
}

int compute(const Config& c) {
    static const std::set<std::string> known{"wcre", "wce", "relative", "conditional", "mutual", "alpha_phi", "shannon"};
    if (!known.count(c.quantity)) {
        std::cerr << "unknown quantity '" << c.quantity << "'\n";
        return usage;
    }
    if (c.model.empty()) throw InputError("--model is required");
    const json model = parse_json_arg(c.model);
    const json weight = c.weight.empty() ? json{{"kind", "constant"}, {"c", 1.0}} : parse_json_arg(c.weight);
    const auto spec = spec_of(c);
    json out{{"quantity", c.quantity}, {"inputs", {{"model", model}, {"weight", weight}, {"spec", spec_to_json(spec)}}}};
    double value = NAN, err = 0.0;
    try {
        if (c.quantity == "relative") {
            if (!model.is_array() || model.size() != 2) throw InputError("relative needs --model as [F, G]");
            value = relative_wcre(univariate_from_json(model[0]), univariate_from_json(model[1]), weight_from_json(weight), spec);
        } else if (is_multivariate_json(model)) {
            const auto m = multivariate_from_json(model);
            const auto w = joint_weight_from_json(weight, m.dim());
            EntropyValue e;
            if (c.quantity == "wcre") e = joint_wcre(m, w, spec);
            else if (c.quantity == "wce") e = joint_wce(m, w, spec);
            else if (c.quantity == "conditional") e = conditional_wcre(m, w, spec);
            else if (c.quantity == "mutual") e = mutual_wcre(m, w, spec);
            else throw InputError(c.quantity + " takes a univariate model");
            value = e.value;
            err = e.quadrature.abs_error_estimate;
        } else {
            const auto m = univariate_from_json(model);
            const auto phi = weight_from_json(weight);
            if (c.quantity == "wcre" || c.quantity == "wce") {
                const auto e = c.quantity == "wcre" ? wcre::wcre(m, phi, spec) : wce(m, phi, spec);
                value = e.value;
                err = e.quadrature.abs_error_estimate;
            } else if (c.quantity == "alpha_phi") {
                value = alpha_phi(m, phi, spec).value;
            } else if (c.quantity == "shannon") {
                value = shannon_entropy(m, spec);
            } else {
                throw InputError(c.quantity + " takes a multivariate model");
            }
        }
    } catch (const DivergenceError& e) {
        out["value"] = nullptr;
        out["error_estimate"] = nullptr;
        out["finite"] = false;
        out["message"] = e.what();
        emit(c, dump(out));
        return divergence;
    }
    out["value"] = number(value);
    out["error_estimate"] = number(err);
    out["finite"] = std::isfinite(value);
    emit(c, dump(out));
    return ok;
}

std::vector<CheckInstance> load_instances(const Config& c) {
    std::vector<CheckInstance> v;
    if (c.use_default) v = default_catalog();
    else if (!c.catalog.empty()) {
        const json j = parse_json_arg(c.catalog);
        v = j.is_object() && j.contains("check_id") ? std::vector<CheckInstance>{instance_from_json(j)} : catalog_from_json(j);
    } else throw InputError("give --catalog or --default");
    for (auto& inst : v) {
        inst.spec = spec_of(c, inst.spec);
        inst.seed += c.seed;
    }
    return v;
}

int verdict_exit(const std::vector<CheckReport>& rs) {
    bool fail = false, error = false;
    for (const auto& r : rs) {
        fail = fail || r.verdict == Verdict::fail;
        error = error || r.verdict == Verdict::error;
    }
    return fail ? input_error : error ? quadrature_failure : ok;
}

void summary_lines(const std::vector<CheckReport>& rs, std::ostream& os) {
    const auto s = summarize(rs);
    for (const auto& [check, counts] : s.per_check) {
        os << std::left << std::setw(24) << check;
        for (const auto& [v, n] : counts) os << ' ' << v << '=' << n;
        os << '\n';
    }
    os << "total";
    for (const auto& [v, n] : s.totals) os << ' ' << v << '=' << n;
    os << '\n';
}

std::string render(const Config& c, const std::vector<CheckReport>& rs) {
    if (c.format == "csv") return reports_csv(rs);
    return dump(reports_to_json(rs));
}

int check(const Config& c) {
    const auto rs = run_suite(load_instances(c), c.jobs);
    emit(c, render(c, rs));
    return verdict_exit(rs);
}

std::string timestamp() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

int suite(const Config& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inst = load_instances(c);
    const auto rs = run_suite(inst, c.jobs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(c, render(c, rs));
    summary_lines(rs, c.out.empty() ? std::cerr : std::cout);
    if (!c.out.empty()) {
        std::ofstream meta(c.out + ".meta.json");
        meta << dump(json{{"timestamp", timestamp()},
                          {"seconds", secs},
                          {"instances", inst.size()},
                          {"jobs", c.jobs},
                          {"seed", c.seed},
                          {"catalog", c.use_default ? "default" : c.catalog}})
             << '\n';
    }
    return verdict_exit(rs);
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            const long v = std::stol(tok);
            if (v <= 0) throw InputError("");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw InputError("bad entry '" + tok + "' in --sizes");
        }
    }
    if (out.empty()) throw InputError("--sizes is empty");
    return out;
}

int estimate(const Config& c) {
    const auto phi = c.weight.empty() ? WeightFunction::constant(1.0) : weight_from_json(parse_json_arg(c.weight));
    if (c.experiment) {
        if (c.model.empty()) throw InputError("--experiment needs --model");
        const auto m = univariate_from_json(parse_json_arg(c.model));
        const auto sizes = parse_sizes(c.sizes.empty() ? "100,1000,10000" : c.sizes);
        const auto rows = convergence_experiment(m, phi, sizes, c.reps ? c.reps : 50, c.seed, spec_of(c));
        std::ostringstream s;
        s << "n,mean_abs_err,sd\n";
        for (const auto& r : rows) s << r.n << ',' << csv_number(r.mean_abs_err) << ',' << csv_number(r.sd) << '\n';
        emit(c, s.str());
        return ok;
    }
    if (c.sample.empty()) throw InputError("--sample is required");
    const auto x = read_sample_csv_file(c.sample);
    std::optional<double> level;
    if (c.reps) level = 0.95;
    const auto e = empirical_wcre(x, phi, level, BootstrapOptions{c.reps ? c.reps : 1000, c.seed});
    emit(c, dump(estimate_to_json(e)));
    return ok;
}

// re-renders a saved report array
int report(const Config& c) {
    if (c.catalog.empty()) throw InputError("report needs --catalog pointing at a report array");
    const json j = parse_json_arg(c.catalog);
    if (!j.is_array()) throw InputError("report input must be a JSON array");
    std::vector<CheckReport> rs;
    for (const auto& r : j) {
        CheckReport x;
        x.check_id = r.at("check_id").get<std::string>();
        x.instance_id = r.value("instance_id", "");
        x.verdict = verdict_from_name(r.at("verdict").get<std::string>());
        x.hypothesis_met = r.value("hypothesis_met", false);
        auto num = [&](const char* k) { return r.contains(k) && r.at(k).is_number() ? r.at(k).get<double>() : NAN; };
        x.lhs = num("lhs");
        x.rhs = num("rhs");
        x.slack = num("slack");
        x.tolerance = num("tolerance");
        rs.push_back(std::move(x));
    }
    if (c.format == "csv") emit(c, reports_csv(rs));
    else {
        std::ostringstream s;
        summary_lines(rs, s);
        emit(c, s.str());
    }
    return verdict_exit(rs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted cumulative residual entropy toolkit"};
    app.require_subcommand(1);
    Config c;
    auto common = [&](CLI::App* s) {
        s->add_option("--tail-mass", c.tail_mass, "tail mass dropped by truncation");
        s->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
        s->add_option("--grid", c.grid, "grid points per dimension");
        s->add_option("--seed", c.seed, "seed");
        s->add_option("--out", c.out, "output path");
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto* cmp = app.add_subcommand("compute", "compute one quantity");
    cmp->add_option("--model", c.model, "model JSON or path")->required();
    cmp->add_option("--weight", c.weight, "weight JSON or path");
    cmp->add_option("--quantity", c.quantity, "wcre | wce | relative | conditional | mutual | alpha_phi | shannon")->required();
    common(cmp);
    auto* chk = app.add_subcommand("check", "run one instance or a catalog");
    chk->add_option("--catalog", c.catalog, "instance or catalog JSON or path");
    chk->add_option("--jobs", c.jobs, "worker threads");
    common(chk);
    auto* sut = app.add_subcommand("suite", "run a catalog");
    sut->add_option("--catalog", c.catalog, "catalog JSON or path");
    sut->add_flag("--default", c.use_default, "use the built-in catalog");
    sut->add_option("--jobs", c.jobs, "worker threads");
    common(sut);
    auto* est = app.add_subcommand("estimate", "plug-in estimate from a sample");
    est->add_option("--sample", c.sample, "CSV sample");
    est->add_option("--weight", c.weight, "weight JSON or path");
    est->add_flag("--experiment", c.experiment, "run the convergence experiment");
    est->add_option("--model", c.model, "target model for --experiment");
    est->add_option("--sizes", c.sizes, "comma separated sample sizes");
    est->add_option("--reps", c.reps, "replications, or bootstrap replicates without --experiment");
    common(est);
    auto* rep = app.add_subcommand("report", "summarize a saved report array");
    rep->add_option("--catalog", c.catalog, "report array JSON or path");
    common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    try {
        if (c.jobs < 1) throw InputError("--jobs must be positive");
        if (*cmp) return compute(c);
        if (*chk) return check(c);
        if (*sut) return suite(c);
        if (*est) return estimate(c);
        return report(c);
    } catch (const ConvergenceError& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return quadrature_failure;
    } catch (const DivergenceError& e) {
        std::cerr << "divergent: " << e.what() << '\n';
        return divergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    }
}
