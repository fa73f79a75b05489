#include "cvdistill/protocol.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cvdistill/parallel.hpp"

namespace cvdistill {

namespace {

constexpr double kQBracketLo = 1e-3;
constexpr double kQBracketHi = 1e3;
constexpr int kSweepPoints = 13;

// Output squeezing of one stage as a function of q, evaluated through the
// element-squaring relations of the two-copy filter (exact for Gaussian
// inputs). NaN when the sigma elements leave the state family.
double stage_output_r(double g10, double g11, double q, int cutoff, const Tolerances& tol) {
    try {
        const SigmaElements sig = two_copy_sigma_for_gaussian(g10, g11, q);
        const SymmetricGaussianState out = asymptotic_state(sig, cutoff, tol);
        return rt_from_cs(out).r;
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

StateSummary summarize(const SymmetricGaussianState& state) {
    StateSummary s;
    s.C = state.C;
    s.S = state.S;
    const ChannelParametrization rt = rt_from_cs(state);
    s.r = rt.r;
    s.T = rt.T;
    s.epsilon = epsilon_from_cs({state.C, std::abs(state.S)});
    s.purity = purity(state);
    s.eof = eof_symmetric(state);
    return s;
}

FockArray fock_state_of(const SymmetricGaussianState& state, int cutoff) {
    const ChannelParametrization rt = rt_from_cs(state);
    FockArray rho = tmsv(rt.lambda(), cutoff, std::numeric_limits<double>::infinity());
    if (rt.T < 1.0) {
        rho = apply_loss(rho, rt.T, 0);
        rho = apply_loss(rho, rt.T, 1);
    }
    return rho;
}

StageReport run_stage(const SymmetricGaussianState& state, double q, int cutoff,
                      const Tolerances& tol) {
    const TwoCopyFilterSpec spec(q);
    StageReport report;
    report.stage = 1;
    report.input = summarize(state);
    report.q = q;
    report.copies_consumed = 2.0;

    FockArray rho = fock_state_of(state, cutoff).to_density();
    report.leakage = rho.max_leakage();

    WeightedState filtered = two_copy_degauss(rho, rho, spec, tol);
    report.leakage = std::max(report.leakage, filtered.rho.max_leakage());

    WeightedState first = gaussification_step(filtered.rho.normalized(), tol);
    report.leakage = std::max(report.leakage, first.rho.max_leakage());

    const SigmaElements sig = sigma_from_rho1(first.rho, tol);
    const SymmetricGaussianState out = asymptotic_state(sig, cutoff, tol);
    report.output = summarize(out);

    const double detection_norm = (1.0 + q * q) * (1.0 + q * q);
    report.weight = filtered.weight / detection_norm * first.weight;
    return report;
}

double tune_q(const SymmetricGaussianState& state, double target_r, int cutoff,
              const Tolerances& tol) {
    const ChannelParametrization rt = rt_from_cs(state);
    const auto [g10, g11] = family_element_ratios(rt.lambda(), rt.T, cutoff);

    auto f = [&](double q) { return stage_output_r(g10, g11, q, cutoff, tol) - target_r; };

    // diagnostic sweep over the log-q bracket; output r must fall with q
    const double log_lo = std::log(kQBracketLo), log_hi = std::log(kQBracketHi);
    std::vector<double> qs(kSweepPoints), fs(kSweepPoints);
    for (int i = 0; i < kSweepPoints; ++i) {
        qs[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kSweepPoints - 1));
        fs[i] = f(qs[i]);
    }
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSweepPoints; ++i) {
        if (std::isnan(fs[i])) continue;  // outside the family: treated as r -> inf
        if (fs[i] > prev + 1e-9) {
            std::ostringstream os;
            os << "stage output squeezing is not monotone in q near q = " << qs[i];
            throw ConvergenceError(os.str());
        }
        prev = fs[i];
    }

    int lo = -1, hi = -1;
    for (int i = 0; i < kSweepPoints; ++i) {
        if (std::isnan(fs[i])) continue;
        if (fs[i] >= 0.0) lo = i;
        if (fs[i] <= 0.0 && hi < 0) hi = i;
    }
    if (lo < 0 || hi < 0) {
        std::ostringstream os;
        os << "no q in [" << kQBracketLo << ", " << kQBracketHi << "] reaches output r = "
           << target_r << "; sweep (q, r_out):";
        for (int i = 0; i < kSweepPoints; ++i)
            os << " (" << qs[i] << ", " << fs[i] + target_r << ")";
        throw ConvergenceError(os.str());
    }

    double qa = qs[lo], fa = fs[lo];
    double qb = qs[hi], fb = fs[hi];
    if (qa > qb) {
        std::swap(qa, qb);
        std::swap(fa, fb);
    }
    // bisection with a secant step whenever it stays inside the bracket
    double q_mid = 0.5 * (qa + qb);
    for (int it = 0; it < 200; ++it) {
        q_mid = 0.5 * (qa + qb);
        if (std::abs(fb - fa) > 1e-300) {
            const double q_sec = qa - fa * (qb - qa) / (fb - fa);
            if (q_sec > qa && q_sec < qb) q_mid = q_sec;
        }
        const double fm = f(q_mid);
        if (std::isnan(fm)) {
            qa = q_mid;  // fell out of the family on the small-q side
            continue;
        }
        if (std::abs(fm) < 0.5 * tol.target_r_tol) return q_mid;
        if (fm > 0.0) {
            qa = q_mid;
            fa = fm;
        } else {
            qb = q_mid;
            fb = fm;
        }
        if (qb - qa < 1e-15 * qb) break;
    }
    const double resid = f(q_mid);
    if (std::abs(resid) < tol.target_r_tol) return q_mid;
    std::ostringstream os;
    os << "q tuning stalled at q = " << q_mid << " with residual " << resid;
    throw ConvergenceError(os.str());
}

std::vector<StageReport> nested_protocol(const ProtocolConfig& config) {
    if (config.stages < 1) throw DomainError("nested protocol needs at least one stage");
    if (!config.initial.entangled())
        throw DomainError("initial state must be entangled");
    if (!config.q_schedule.empty() &&
        static_cast<int>(config.q_schedule.size()) != config.stages)
        throw DomainError("q schedule length must match the stage count");

    std::vector<StageReport> reports;
    SymmetricGaussianState state = config.initial;
    double copies = 1.0;
    for (int k = 1; k <= config.stages; ++k) {
        const double q = config.q_schedule.empty()
                             ? tune_q(state, config.target_r, config.cutoff, config.tol)
                             : config.q_schedule[k - 1];
        StageReport rep = run_stage(state, q, config.cutoff, config.tol);
        rep.stage = k;
        copies *= 2.0;
        rep.copies_consumed = copies;

        const double eps_in = rep.input.epsilon;
        const double eps_out = rep.output.epsilon;
        const double expected = eps_in * eps_in;
        const double err = std::abs(eps_out - expected);
        if (err > 1e-8 * std::max(expected, 1e-12)) {
            std::ostringstream os;
            os << "stage " << k << " violated the squaring law: eps_out = " << eps_out
               << ", eps_in^2 = " << expected;
            throw ConvergenceError(os.str());
        }
        state = {rep.output.C, rep.output.S};
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<Fig3Row> figure3_data(std::span<const double> eps_grid, int n_max) {
    std::vector<Fig3Row> rows;
    rows.reserve(eps_grid.size() * n_max);
    for (double eps : eps_grid) {
        if (eps < 0.0 || eps >= 1.0) throw DomainError("figure3 requires eps_in in [0, 1)");
        double e = eps;
        for (int n = 1; n <= n_max; ++n) {
            e = e * e;
            rows.push_back({eps, n, e});
        }
    }
    return rows;
}

std::vector<Fig4Row> figure4_data(std::span<const double> t_grid, int n_max, int cutoff,
                                  double target_r, int jobs, const Tolerances& tol) {
    std::vector<std::vector<Fig4Row>> per_t(t_grid.size());
    parallel_for(static_cast<long>(t_grid.size()), jobs, [&](long i) {
        const double T = t_grid[i];
        SymmetricGaussianState state = cs_from_rt(target_r, T);
        std::vector<Fig4Row> rows;
        StateSummary s = summarize(state);
        rows.push_back({T, 0, s.purity, s.eof});
        for (int n = 1; n <= n_max; ++n) {
            const double q = tune_q(state, target_r, cutoff, tol);
            const StageReport rep = run_stage(state, q, cutoff, tol);
            rows.push_back({T, n, rep.output.purity, rep.output.eof});
            state = {rep.output.C, rep.output.S};
        }
        per_t[i] = std::move(rows);
    });
    std::vector<Fig4Row> rows;
    rows.reserve(t_grid.size() * (n_max + 1));
    for (auto& block : per_t)
        for (auto& row : block) rows.push_back(row);
    return rows;
}

}  // namespace cvdistill
