#include "wcre/empirical.hpp"

#include "wcre/entropy.hpp"
#include "wcre/errors.hpp"
#include "wcre/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wcre {

namespace {

double neg_plogp(double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log(p); }

// xs sorted; counts[i] copies of xs[i]; total n
double step_sum(const std::vector<double>& xs, const std::vector<std::size_t>& counts, std::size_t n,
                const std::vector<double>& psi_at, bool residual, std::size_t* pieces) {
    double total = 0.0;
    std::size_t cum = 0, used = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        cum += counts[i];
        if (counts[i] == 0 && cum == 0) continue;
        const double d = psi_at[i + 1] - psi_at[i];
        ++used;
        if (d == 0.0) continue;
        const double nd = static_cast<double>(n);
        const double p = residual ? static_cast<double>(n - cum) / nd : static_cast<double>(cum) / nd;
        total += neg_plogp(p) * d;
    }
    if (pieces) *pieces = used;
    return total;
}

EmpiricalEstimate estimate(std::vector<double> sample, const WeightFunction& phi, std::optional<double> level,
                           const BootstrapOptions& boot, bool residual) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
    for (double x : sample)
        if (!(x >= 0) || !std::isfinite(x)) throw DomainError("sample entries must be finite and nonnegative");
    if (level && !(*level > 0 && *level < 1)) throw DomainError("confidence level must lie in (0, 1)");
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    std::vector<double> psi_at(n);
    for (std::size_t i = 0; i < n; ++i) psi_at[i] = phi.psi(sample[i]);
    const std::vector<std::size_t> ones(n, 1);

    EmpiricalEstimate out;
    out.n = n;
    out.value = step_sum(sample, ones, n, psi_at, residual, &out.pieces);
    if (!level) return out;

    out.level = *level;
    std::vector<double> reps(boot.replicates);
    std::vector<std::size_t> counts(n);
    for (std::size_t b = 0; b < boot.replicates; ++b) {
        CounterRng rng(boot.seed, b);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t k = 0; k < n; ++k) ++counts[rng.below(n)];
        reps[b] = step_sum(sample, counts, n, psi_at, residual, nullptr);
    }
    std::sort(reps.begin(), reps.end());
    auto pct = [&](double q) {
        const double h = q * static_cast<double>(reps.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, reps.size() - 1);
        return reps[lo] + (h - static_cast<double>(lo)) * (reps[hi] - reps[lo]);
    };
    const double a = 0.5 * (1.0 - *level);
    out.bootstrap_ci = std::make_pair(pct(a), pct(1.0 - a));
    return out;
}

}  // namespace

EmpiricalEstimate empirical_wcre(std::vector<double> sample, const WeightFunction& phi, std::optional<double> level,
                                 const BootstrapOptions& boot) {
    return estimate(std::move(sample), phi, level, boot, true);
}

EmpiricalEstimate empirical_wce(std::vector<double> sample, const WeightFunction& phi, std::optional<double> level,
                                const BootstrapOptions& boot) {
    return estimate(std::move(sample), phi, level, boot, false);
}

std::vector<ConvergenceRow> convergence_experiment(const UnivariateModel& target, const WeightFunction& phi,
                                                   const std::vector<std::size_t>& sizes, std::size_t replications,
                                                   std::uint64_t seed, const QuadratureSpec& spec) {
    if (sizes.empty() || replications == 0) throw DomainError("experiment needs sizes and replications");
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] == 0) throw DomainError("sample sizes must be positive");
        if (k > 0 && sizes[k] <= sizes[k - 1]) throw DomainError("sample sizes must increase");
    }
    const double truth = wcre(target, phi, spec).value;  // DivergenceError refuses the target
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        std::vector<double> err(replications);
        for (std::size_t r = 0; r < replications; ++r) {
            const auto stream = (static_cast<std::uint64_t>(k) << 32) | r;
            err[r] = std::abs(empirical_wcre(target.sample_n(sizes[k], seed, stream), phi).value - truth);
        }
        double mean = 0.0;
        for (double e : err) mean += e;
        mean /= static_cast<double>(replications);
        double ss = 0.0;
        for (double e : err) ss += (e - mean) * (e - mean);
        const double sd = replications > 1 ? std::sqrt(ss / static_cast<double>(replications - 1)) : 0.0;
        rows.push_back({sizes[k], mean, sd});
    }
    return rows;
}

bool convergence_monotone(const std::vector<ConvergenceRow>& rows) {
    int inversions = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].mean_abs_err <= rows[k - 1].mean_abs_err) continue;
        if (rows[k].mean_abs_err - rows[k - 1].mean_abs_err > rows[k].sd) return false;
        ++inversions;
    }
    return inversions <= 1;
}

std::vector<double> quantile_lattice(const UnivariateModel& m, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = m.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return out;
}

std::vector<double> read_sample_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r,");
        const std::string cell = line.substr(b, e - b + 1);
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
            if (!seen_data && out.empty()) {  // header
                seen_data = true;
                continue;
            }
            throw InputError("sample line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
        }
        seen_data = true;
        if (!(v >= 0) || !std::isfinite(v))
            throw InputError("sample line " + std::to_string(lineno) + ": value must be finite and nonnegative");
        out.push_back(v);
    }
    if (out.empty()) throw InputError("sample file has no data rows");
    return out;
}

std::vector<double> read_sample_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open sample file " + path);
    return read_sample_csv(f);
}

}  // namespace wcre
