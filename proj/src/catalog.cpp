#include "wcre/harness.hpp"
#include "wcre/json_io.hpp"

namespace wcre {

namespace {

json expo(double rate) { return {{"family", "exponential"}, {"lambda", rate}}; }
json unif(double a, double b) { return {{"family", "uniform"}, {"a", a}, {"b", b}}; }
json gam(double k, double theta) { return {{"family", "gamma"}, {"k", k}, {"theta", theta}}; }
json wib(double rate, double q) { return {{"family", "weibull"}, {"lambda", rate}, {"q", q}}; }
json lomax(double alpha) { return {{"family", "lomax"}, {"alpha", alpha}}; }

json constant(double c = 1.0) { return {{"kind", "constant"}, {"c", c}}; }
json power(double a) { return {{"kind", "power"}, {"a", a}}; }
json expw(double r) { return {{"kind", "exponential"}, {"r", r}}; }
json product(std::vector<json> f) { return {{"kind", "product"}, {"factors", f}}; }

json fgm(double theta, json a, json b) { return {{"family", "fgm"}, {"theta", theta}, {"marginals", {a, b}}}; }
json chain(double t12, double t23) {
    return {{"family", "fgm_chain"}, {"t12", t12}, {"t23", t23}, {"marginals", {expo(1), expo(1), expo(1)}}};
}
json indep(std::vector<json> m) { return {{"family", "independent"}, {"marginals", m}}; }
json mvn(json cov) { return {{"family", "mvgaussian"}, {"cov", cov}}; }

struct Add {
    std::vector<CheckInstance>& out;
    CheckInstance& operator()(const std::string& id, const std::string& check, json models, json weight = json::object(),
                              json params = json::object(), int grid = 0) {
        CheckInstance c;
        c.id = id;
        c.check_id = check;
        c.models = std::move(models);
        c.weight = std::move(weight);
        c.params = std::move(params);
        if (grid > 0) c.spec.grid_points_per_dim = grid;
        out.push_back(std::move(c));
        return out.back();
    }
};

}  // namespace

std::vector<CheckInstance> default_catalog() {
    std::vector<CheckInstance> out;
    Add add{out};
    const json none = json::object();

    add("gibbs_exp1_exp2", "GIBBS", {expo(1), expo(2)}, constant());
    add("gibbs_equal", "GIBBS", {expo(1), expo(1)}, constant());
    add("gibbs_gamma_weibull_power", "GIBBS", {gam(2, 1), wib(1, 2)}, power(1));
    add("gibbs_wrong_sign", "GIBBS", {expo(2), expo(1)}, constant());

    add("uniform_discrete", "UNIFORM_EST_DISCRETE", json::array(), constant(), {{"probs", {0.2, 0.3, 0.5}}});
    add("uniform_discrete_equal", "UNIFORM_EST_DISCRETE", json::array(), constant(),
        {{"probs", {1.0 / 3, 1.0 / 3, 1.0 / 3}}});
    add("uniform_discrete_large_beta", "UNIFORM_EST_DISCRETE", json::array(), constant(),
        {{"probs", {0.2, 0.3, 0.5}}, {"beta", 0.5}});
    add("uniform_cont", "UNIFORM_EST_CONT", {unif(0, 1)}, constant(), {{"alpha", 0.9}, {"beta", 0.85}});
    add("uniform_cont_wrong_sign", "UNIFORM_EST_CONT", {unif(0, 1)}, constant(), {{"alpha", 1.2}, {"beta", 1.0}});

    add("rel_convex", "REL_CONVEX", {expo(1), expo(2), gam(2, 1), expo(0.5)}, constant(), {{"lambda1", 0.3}});
    add("rel_convex_equal", "REL_CONVEX", {expo(1), expo(2), expo(1), expo(2)}, power(1), {{"lambda1", 0.6}});
    add("rel_dpi_smoothing", "REL_DPI", {expo(1), expo(2), {{"kind", "gaussian_smoothing"}, {"h", 0.5}}}, constant());
    add("rel_dpi_grid", "REL_DPI",
        {gam(2, 1), expo(1),
         {{"kind", "grid_matrix"}, {"edges", {0, 1, 2, 4, 8}},
          {"matrix", {{0.7, 0.2, 0.1, 0.0}, {0.2, 0.6, 0.2, 0.0}, {0.0, 0.2, 0.6, 0.2}, {0.0, 0.0, 0.3, 0.7}}}}},
        power(1));

    add("concavity_constant", "CONCAVITY", {expo(1), gam(2, 1)}, constant());
    add("concavity_power", "CONCAVITY", {expo(1), gam(2, 1)}, power(1));

    add("finite_exponential", "FINITENESS", {expo(1)}, constant(), {{"p", 2}, {"alpha", 0.75}, {"a", 1}});
    add("finite_lomax_no_certificate", "FINITENESS", {lomax(6)}, constant(), {{"p", 1}, {"alpha", 0.5}, {"a", 1}});
    add("divergent_lomax", "FINITENESS", {lomax(0.8)}, constant(), {{"p", 1}, {"alpha", 0.5}, {"a", 1}});

    add("convergence_exponential", "CONVERGENCE", {expo(1)}, constant());
    add("convergence_gamma_power", "CONVERGENCE", {gam(2, 1)}, power(1), {{"p", 4}});
    add("convergence_gamma_power_weak_moment", "CONVERGENCE", {gam(2, 1)}, power(1), {{"p", 2}});

    add("sum_indep_constant", "SUM_INDEP", {expo(1), expo(2)}, constant());
    add("sum_indep_power", "SUM_INDEP", {expo(1), gam(2, 0.5)}, power(1));

    add("decomp_exp_exp", "DECOMP", {indep({expo(1), expo(2)})}, constant());
    add("decomp_uniform_exp_power", "DECOMP", {indep({unif(0, 1), expo(1)})}, product({power(1), constant()}));
    add("decomp_exp3", "DECOMP", {indep({expo(1), expo(2), expo(0.5)})}, constant(), none, 64);

    add("entropy_lb_exp", "ENTROPY_LB", {expo(1)}, constant());
    add("entropy_lb_exp_power", "ENTROPY_LB", {expo(1)}, power(1));
    add("entropy_lb_gamma_exp", "ENTROPY_LB", {gam(3, 1)}, expw(0.5));
    add("entropy_lb_conditional", "ENTROPY_LB", {expo(1), expo(2)}, power(1), {{"theta", 0.6}, {"y", 0.3}});
    add("entropy_lb_point_zero_weight", "ENTROPY_LB", {unif(0, 2)}, {{"kind", "tabulated"}, {"knots", {{0, 0}, {1, 0}, {2, 1}}}});

    add("cross_lb_constant", "CROSS_LB", {fgm(0.5, expo(1), expo(2))}, product({constant(), constant()}));
    add("cross_lb_scaled", "CROSS_LB", {fgm(-0.4, gam(2, 1), expo(1))}, product({constant(2), constant(1.5)}));
    add("cross_lb_small_weight", "CROSS_LB", {fgm(0.5, expo(1), expo(1))}, product({constant(0.5), constant()}));

    add("we_relation_bounded_psi", "WE_RELATION", {expo(1)}, expw(0.5));
    add("we_relation_unbounded_psi", "WE_RELATION", {expo(1)}, constant());

    add("gini_exp", "GINI_LB", {expo(1)}, constant(), {{"n_mc", 100000}});
    add("gini_gamma_power", "GINI_LB", {gam(2, 1)}, power(1), {{"n_mc", 100000}});

    add("surv_identity_exp", "SURV_IDENTITY", {expo(1)}, constant());
    add("surv_identity_weibull_power", "SURV_IDENTITY", {wib(1, 2)}, power(1));

    add("fenchel_exp", "FENCHEL_UB", {expo(1)}, constant(), {{"n_mc", 100000}});
    add("fenchel_gamma_power", "FENCHEL_UB", {gam(2, 1)}, power(1), {{"n_mc", 100000}});

    add("logplus_exp_power", "LOGPLUS", {expo(1)}, power(1));
    add("logplus_gamma", "LOGPLUS", {gam(3, 2)}, constant());

    add("cond_nonneg_fgm", "COND_NONNEG", {fgm(0.5, expo(1), expo(1))}, constant());
    add("cond_nonneg_fgm_power", "COND_NONNEG", {fgm(-0.7, expo(1), gam(2, 1))}, product({power(1), constant()}));
    add("cond_nonneg_chain3", "COND_NONNEG", {chain(0.4, 0.5)}, constant(), none, 64);

    add("subadd_independent", "SUBADD", {indep({expo(1), expo(1)})}, constant());
    add("subadd_fgm_positive", "SUBADD", {fgm(0.5, expo(1), expo(2))}, constant());
    add("subadd_fgm_negative", "SUBADD", {fgm(-0.5, expo(1), expo(2))}, constant());

    add("subadd_chain", "SUBADD_CHAIN", {chain(0.4, 0.5)}, constant(), none, 64);
    add("subadd_chain_negative", "SUBADD_CHAIN", {chain(-0.4, 0.5)}, constant(), none, 64);

    add("strong_subadd_markov", "STRONG_SUBADD", {chain(0.4, 0.5)}, constant(), none, 64);
    add("strong_subadd_fgm3", "STRONG_SUBADD",
        {{{"family", "fgm3"}, {"t12", 0.3}, {"t13", 0.4}, {"t23", 0.3}, {"marginals", {expo(1), expo(1), expo(1)}}}},
        constant(), none, 64);
    add("strong_subadd_fgm3_negative", "STRONG_SUBADD",
        {{{"family", "fgm3"}, {"t12", 0.3}, {"t13", -0.4}, {"t23", 0.3}, {"marginals", {expo(1), expo(1), expo(1)}}}},
        constant(), none, 64);

    add("cond_dpi_markov", "COND_DPI", {chain(0.4, 0.5)}, constant(), none, 64);
    add("cond_dpi_negative", "COND_DPI", {chain(-0.4, 0.5)}, constant(), none, 64);
    add("mutual_dpi_markov", "MUTUAL_DPI", {chain(0.4, 0.5)}, constant(), none, 64);
    add("mutual_dpi_negative", "MUTUAL_DPI", {chain(-0.4, 0.5)}, constant(), none, 64);

    add("marginal_subadd_gauss", "MARGINAL_SUBADD", {mvn({{1, 0.5}, {0.5, 1}})}, constant());
    add("marginal_subadd_gauss_diag", "MARGINAL_SUBADD", {mvn({{1, 0}, {0, 2}})}, constant());
    add("marginal_subadd_gauss_negative", "MARGINAL_SUBADD", {mvn({{1, -0.5}, {-0.5, 1}})}, constant());

    add("hadamard_gauss", "HADAMARD", {mvn({{1, 0.5}, {0.5, 2}})}, constant());
    add("hadamard_diag", "HADAMARD", {mvn({{1, 0}, {0, 2}})}, constant());
    add("hadamard_negative", "HADAMARD", {mvn({{1, -0.5}, {-0.5, 2}})}, constant());

    add("max_generic_uniform_exp", "MAX_GENERIC", {unif(0, 2), expo(1)}, constant());
    add("max_generic_wrong_sign", "MAX_GENERIC", {expo(1), unif(0, 2)}, constant());
    add("max_gauss_uniform", "MAX_GAUSS", {unif(0.9, 1.1)}, constant());
    add("max_gauss_weibull", "MAX_GAUSS", {wib(1, 12)}, constant());
    add("max_gauss_gamma", "MAX_GAUSS", {gam(4, 0.5)}, constant());
    add("max_gauss_exp", "MAX_GAUSS", {expo(1)}, constant());

    add("max_exp_uniform", "MAX_EXP", {unif(0, 2)}, constant());
    add("max_exp_weibull", "MAX_EXP", {wib(1, 2)}, constant());
    add("max_exp_gamma", "MAX_EXP", {gam(2, 0.5)}, constant());
    add("max_exp_gamma_heavy", "MAX_EXP", {gam(0.5, 2)}, constant());

    add("ky_fan", "KY_FAN", json::array(), constant(),
        {{"C1", {{1, 0.3}, {0.3, 1}}}, {"C2", {{2, -0.2}, {-0.2, 1}}}, {"lambda1", 0.5}}, 128);
    add("ky_fan_equal", "KY_FAN", json::array(), constant(),
        {{"C1", {{1, 0.3}, {0.3, 1}}}, {"C2", {{1, 0.3}, {0.3, 1}}}, {"lambda1", 0.4}}, 128);
    add("ky_fan_power_weight", "KY_FAN", json::array(), product({power(1), constant()}),
        {{"C1", {{1, 0.3}, {0.3, 1}}}, {"C2", {{2, -0.2}, {-0.2, 1}}}, {"lambda1", 0.5}}, 128);

    add("max_weibull_exp_p2", "MAX_WEIBULL", {expo(1)}, constant(0.5), {{"p", 2}});
    add("max_weibull_gamma_p3", "MAX_WEIBULL", {gam(2, 1)}, constant(0.5), {{"p", 3}});
    add("max_weibull_large_weight", "MAX_WEIBULL", {expo(1)}, constant(2), {{"p", 2}});

    for (const char* id : {"CHAIN_COND_MONOTONE", "CHAIN_COND_PAIR_LB", "CHAIN_COND_PAIR_SUBADD", "CHAIN_STRONG_SUBADD"})
        add(std::string("stub_") + id, id, {chain(0.4, 0.5)}, constant(), none, 64);

    std::uint64_t seed = 0;
    for (auto& c : out) c.seed = seed++;
    return out;
}

}  // namespace wcre
