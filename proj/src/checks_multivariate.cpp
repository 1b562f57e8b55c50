#include "checks_common.hpp"

#include "wcre/gaussian.hpp"

#include <map>

namespace wcre {

using namespace detail;

namespace {

using Values = std::map<std::string, double>;
using GridFn = std::function<Values(const SurvivalGrid&)>;
using Idx = SurvivalGrid::Index;

constexpr unsigned b1 = 1u, b2 = 2u, b3 = 4u;

// evaluates fn on the instance grid and on the half grid; deltas go to the diagnostics
Values on_grids(const InstanceView& v, const MultivariateModel& m, ReportBuilder& b, const GridFn& fn) {
    const int n = static_cast<int>(v.param("grid", v.spec().grid_points_per_dim));
    const Values full = fn(SurvivalGrid(m, v.spec(), n));
    const Values half = fn(SurvivalGrid(m, v.spec(), std::max(4, n / 2)));
    for (const auto& [k, x] : full) {
        b.diagnostic(k, x);
        b.diagnostic("grid_delta:" + k, std::abs(x - half.at(k)));
    }
    b.diagnostic("grid_points_per_dim", n);
    return full;
}

MultivariateModel model_of_dim(const InstanceView& v, int lo, int hi) {
    auto m = v.multivariate(0);
    if (m.dim() < lo || m.dim() > hi)
        throw InputError(v.instance().check_id + " needs a model of dimension " + std::to_string(lo) +
                         (hi > lo ? "-" + std::to_string(hi) : ""));
    return m;
}

double ratio(double a, double c) { return c > 0 ? a / c : 0.0; }

CheckReport cond_nonneg(const InstanceView& v) {
    const auto m = model_of_dim(v, 2, 3);
    const auto w = v.joint_weight(m.dim());
    ReportBuilder b(v.instance(), tol_grid);
    const bool tri = m.dim() == 3;
    const unsigned cond = tri ? (b2 | b3) : b2;
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask();
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            const double s = g.sf(f, i);
            return s * (ratio(s, g.sf(cond, i)) - 1.0);
        });
        const auto psi = reduce_weight(g, W, cond);
        return Values{{"hypothesis", hyp},
                      {"joint", grid_entropy(g, W)},
                      {"reduced", grid_entropy(g, psi)},
                      {"conditional", grid_entropy(g, W, cond)}};
    });
    b.hypothesis("int phi sf [sf(x1 | rest) - 1]", q.at("hypothesis"), Sign::nonpos);
    b.conclusion(tri ? "E_psi23(X23) <= E(X123)" : "E_psi2(X2) <= E(X12)", q.at("reduced"), q.at("joint"));
    b.conclusion("conditional wcre >= 0", 0.0, q.at("conditional"));
    if (tri) b.note("hypothesis reconstructed");
    return b.finish();
}

// shared by the two sub-additivity checks
CheckReport subadd_common(const InstanceView& v, int max_dim) {
    const auto m = model_of_dim(v, 2, max_dim);
    const auto w = v.joint_weight(m.dim());
    ReportBuilder b(v.instance(), tol_grid);
    const int n = m.dim();
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask();
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            double p = 1.0;
            for (int k = 0; k < n; ++k) p *= g.sf(1u << k, i);
            return g.sf(f, i) - p;
        });
        Values out{{"hypothesis", hyp}, {"joint", grid_entropy(g, W)}};
        double sum = 0.0;
        std::vector<unsigned> parts;
        for (int k = 0; k < n; ++k) {
            const double e = grid_entropy(g, reduce_weight(g, W, 1u << k));
            out["marginal_" + std::to_string(k + 1)] = e;
            sum += e;
            parts.push_back(1u << k);
        }
        out["marginal_sum"] = sum;
        out["tau"] = grid_mutual(g, W, parts);
        return out;
    });
    b.hypothesis("int phi (sf - prod sf_i)", q.at("hypothesis"), Sign::nonneg);
    b.conclusion("E(X) <= sum E_psi_i(X_i)", q.at("joint"), q.at("marginal_sum"));
    b.conclusion("tau >= 0", 0.0, q.at("tau"));
    return b.finish();
}

CheckReport subadd(const InstanceView& v) { return subadd_common(v, 3); }
CheckReport marginal_subadd(const InstanceView& v) { return subadd_common(v, 3); }

CheckReport subadd_chain(const InstanceView& v) {
    const auto m = model_of_dim(v, 3, 3);
    const auto w = v.joint_weight(3);
    ReportBuilder b(v.instance(), tol_grid);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask(), j = b1 | b2;
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            return (g.sf(j, i) - g.sf(b1, i) * g.sf(b2, i)) * ratio(g.sf(f, i), g.sf(j, i));
        });
        return Values{{"hypothesis", hyp},
                      {"conditional_psi12", grid_entropy(g, reduce_weight(g, W, j), b2)},
                      {"marginal_psi1", grid_entropy(g, reduce_weight(g, W, b1))}};
    });
    b.hypothesis("int phi (sf12 - sf1 sf2) sf123 / sf12", q.at("hypothesis"), Sign::nonneg);
    b.conclusion("E_psi12(X1 | X2) <= E_psi1(X1)", q.at("conditional_psi12"), q.at("marginal_psi1"));
    return b.finish();
}

CheckReport strong_subadd(const InstanceView& v) {
    const auto m = model_of_dim(v, 3, 3);
    const auto w = v.joint_weight(3);
    ReportBuilder b(v.instance(), tol_grid);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask(), m12 = b1 | b2, m23 = b2 | b3;
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            return g.sf(f, i) - g.sf(m12, i) * ratio(g.sf(m23, i), g.sf(b2, i));
        });
        const double e = grid_entropy(g, W), e2 = grid_entropy(g, reduce_weight(g, W, b2));
        const double e12 = grid_entropy(g, reduce_weight(g, W, m12)), e23 = grid_entropy(g, reduce_weight(g, W, m23));
        return Values{{"hypothesis", hyp}, {"joint", e}, {"psi2", e2}, {"psi12", e12}, {"psi23", e23}};
    });
    b.hypothesis("int phi (sf123 - sf12 sf23 / sf2)", q.at("hypothesis"), Sign::nonneg);
    b.conclusion("E(X123) + E_psi2(X2) <= E_psi12(X12) + E_psi23(X23)", q.at("joint") + q.at("psi2"),
                 q.at("psi12") + q.at("psi23"));
    return b.finish();
}

CheckReport cond_dpi(const InstanceView& v) {
    const auto m = model_of_dim(v, 3, 3);
    const auto w = v.joint_weight(3);
    ReportBuilder b(v.instance(), tol_grid);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask(), m12 = b1 | b2, m13 = b1 | b3, m23 = b2 | b3;
        const double markov = grid_integral(g, W, [&](const Idx& i) {
            return g.sf(f, i) - g.sf(m12, i) * ratio(g.sf(m13, i), g.sf(b1, i));
        });
        const double bracket = grid_integral(g, W, [&](const Idx& i) {
            const double s = g.sf(f, i);
            return s * (ratio(s, g.sf(m13, i)) - 1.0);
        });
        return Values{{"hypothesis_markov", markov},
                      {"hypothesis_bracket", bracket},
                      {"cond_3_given_2", grid_entropy(g, reduce_weight(g, W, m23), b2)},
                      {"cond_3_given_1", grid_entropy(g, reduce_weight(g, W, m13), b1)}};
    });
    b.hypothesis("int phi (sf123 - sf12 sf13 / sf1)", q.at("hypothesis_markov"), Sign::nonneg);
    b.hypothesis("int phi sf123 [sf(x2 | x1, x3) - 1]", q.at("hypothesis_bracket"), Sign::nonpos);
    b.conclusion("E_psi23(X3 | X2) <= E_psi13(X3 | X1)", q.at("cond_3_given_2"), q.at("cond_3_given_1"),
                 {"int phi (sf123 - sf12 sf13 / sf1)"});
    b.conclusion("E_psi13(X3 | X1) <= 2 E_psi23(X3 | X2)", q.at("cond_3_given_1"), 2.0 * q.at("cond_3_given_2"),
                 {"int phi sf123 [sf(x2 | x1, x3) - 1]"});
    return b.finish();
}

CheckReport mutual_dpi(const InstanceView& v) {
    const auto m = model_of_dim(v, 3, 3);
    const auto w = v.joint_weight(3);
    ReportBuilder b(v.instance(), tol_grid);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask(), m12 = b1 | b2, m13 = b1 | b3, m23 = b2 | b3;
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            return g.sf(f, i) - g.sf(m13, i) * ratio(g.sf(m23, i), g.sf(b3, i));
        });
        return Values{{"hypothesis", hyp},
                      {"tau13", grid_mutual(g, reduce_weight(g, W, m13), {b1, b3})},
                      {"tau12", grid_mutual(g, reduce_weight(g, W, m12), {b1, b2})}};
    });
    b.hypothesis("int phi (sf123 - sf13 sf23 / sf3)", q.at("hypothesis"), Sign::nonneg);
    b.conclusion("tau_psi13(X1:X3) <= tau_psi12(X1:X2)", q.at("tau13"), q.at("tau12"));
    return b.finish();
}

CheckReport decomp(const InstanceView& v) {
    const auto m = model_of_dim(v, 2, 3);
    if (m.family() != MultivariateModel::Family::independent) throw InputError("DECOMP needs an independent model");
    const auto w = v.joint_weight(m.dim());
    ReportBuilder b(v.instance(), tol_grid);
    const auto d = independent_decomposition(m, w, v.spec());
    for (std::size_t i = 0; i < d.parts.size(); ++i) b.diagnostic("part_" + std::to_string(i + 1), d.parts[i]);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) { return Values{{"joint", grid_entropy(g, weight_tensor(g, w))}}; });
    b.conclusion("joint wcre = sum of parts", std::abs(q.at("joint") - d.total), 0.0);
    return b.finish();
}

CheckReport hadamard(const InstanceView& v) {
    const auto m = model_of_dim(v, 2, 3);
    if (m.family() != MultivariateModel::Family::gaussian) throw InputError("HADAMARD needs a gaussian model");
    for (double mu : m.mean())
        if (mu != 0.0) throw InputError("HADAMARD needs a zero mean");
    const auto& C = m.cov();
    const int n = m.dim();
    const auto w = v.joint_weight(n);
    ReportBuilder b(v.instance(), tol_grid);
    double diag = 1.0;
    for (int i = 0; i < n; ++i) diag *= C(i, i);
    const double logdet = std::log(diag / C.determinant());
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    const auto q = on_grids(v, m, b, [&](const SurvivalGrid& g) {
        const auto W = weight_tensor(g, w);
        const unsigned f = g.full_mask();
        const double hyp = grid_integral(g, W, [&](const Idx& i) {
            double p = 1.0;
            for (int k = 0; k < n; ++k) p *= g.sf(1u << k, i);
            return g.sf(f, i) - p;
        });
        const double alpha = grid_integral(g, W, [&](const Idx& i) { return g.sf(f, i); });
        const double tail = grid_integral(g, W, [&](const Idx& i) {
            const double s = g.sf(f, i);
            if (!(s > 0)) return 0.0;
            std::vector<double> x(static_cast<std::size_t>(n));
            double prod = 1.0;
            for (int k = 0; k < n; ++k) {
                x[static_cast<std::size_t>(k)] = g.node(k, i[static_cast<std::size_t>(k)]);
                const double sd = std::sqrt(C(k, k));
                prod *= std::sqrt(2.0 * M_PI) * sd * normal_q(x[static_cast<std::size_t>(k)] / sd);
            }
            const double a = gaussian_alpha_star(zero, C, x);
            return a > 0 && prod > 0 ? s * std::log(a / prod) : 0.0;
        });
        std::vector<unsigned> parts;
        for (int k = 0; k < n; ++k) parts.push_back(1u << k);
        return Values{{"hypothesis", hyp},
                      {"alpha", alpha},
                      {"lhs", 0.5 * alpha * logdet + tail},
                      {"tau", grid_mutual(g, W, parts)}};
    });
    b.hypothesis("int phi (sf - prod sf_i)", q.at("hypothesis"), Sign::nonneg);
    b.conclusion("Hadamard form >= 0", 0.0, q.at("lhs"));
    return b.finish();
}

CheckFn stub(const std::string& what) {
    return [what](const InstanceView& v) {
        return ReportBuilder(v.instance(), tol_grid)
            .unimplemented(what + ": its hypotheses are stated elsewhere and are not reproduced here");
    };
}

}  // namespace

void register_multivariate_checks(CheckRegistry& r) {
    r.add("COND_NONNEG", cond_nonneg);
    r.add("SUBADD", subadd);
    r.add("SUBADD_CHAIN", subadd_chain);
    r.add("STRONG_SUBADD", strong_subadd);
    r.add("COND_DPI", cond_dpi);
    r.add("MUTUAL_DPI", mutual_dpi);
    r.add("DECOMP", decomp);
    r.add("MARGINAL_SUBADD", marginal_subadd);
    r.add("HADAMARD", hadamard);
    r.add("CHAIN_COND_MONOTONE", stub("conditioning on more coordinates lowers the conditional entropy"));
    r.add("CHAIN_COND_PAIR_LB", stub("pair conditional lower bound"));
    r.add("CHAIN_COND_PAIR_SUBADD", stub("pair conditional sub-additivity"));
    r.add("CHAIN_STRONG_SUBADD", stub("conditional strong sub-additivity"));
}

}  // namespace wcre
