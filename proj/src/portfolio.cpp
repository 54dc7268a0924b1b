#include "tempnet/portfolio.hpp"

#include "tempnet/errors.hpp"
#include "tempnet/lp.hpp"
#include "tempnet/parallel.hpp"
#include "tempnet/qp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace tempnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite())
        throw ValidationError(std::string(what) + " has non-finite entries");
}

} // namespace

const char* to_string(PortfolioMode mode) {
    return mode == PortfolioMode::central ? "central" : "peripheral";
}

std::vector<int> select_portfolio(const CentralityRanking& ranking, int m,
                                  PortfolioMode mode) {
    const int n = static_cast<int>(ranking.order.size());
    if (m < 1 || m > n)
        throw ValidationError("portfolio size " + std::to_string(m) +
                              " outside [1, " + std::to_string(n) + "]");
    std::vector<int> members;
    members.reserve(m);
    if (mode == PortfolioMode::central)
        members.assign(ranking.order.begin(), ranking.order.begin() + m);
    else
        members.assign(ranking.order.end() - m, ranking.order.end());
    std::sort(members.begin(), members.end());
    return members;
}

Portfolio mean_variance_weights(const Eigen::MatrixXd& cov,
                                const Eigen::VectorXd& mean, double q,
                                bool long_only) {
    const int m = static_cast<int>(cov.rows());
    if (m < 1 || cov.cols() != m)
        throw ValidationError("covariance matrix not square");
    if (mean.size() != m)
        throw ValidationError("mean vector length does not match covariance");
    if (!(q >= 0.0) || !std::isfinite(q))
        throw ValidationError("risk tolerance must be finite and >= 0");
    check_finite(cov, "covariance");
    check_finite(mean, "mean vector");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw ValidationError("covariance matrix not symmetric");

    Eigen::MatrixXd sigma = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma,
                                                      Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues()(m - 1);
    if (es.eigenvalues()(0) < -1e-8 * std::max(1.0, top))
        throw ValidationError("covariance matrix not positive semidefinite");
    if (es.eigenvalues()(0) <= 1e-12 * std::max(1.0, top))
        sigma.diagonal().array() += 1e-10 * sigma.trace() / m;

    const QpResult res = solve_budget_qp(sigma, q * mean, long_only);
    if (std::abs(res.x.sum() - 1.0) > 1e-9)
        throw NumericError("portfolio weights violate the budget constraint");

    Portfolio p;
    p.long_only = long_only;
    p.members.resize(m);
    std::iota(p.members.begin(), p.members.end(), 0);
    p.weights = res.x;
    return p;
}

Eigen::VectorXd sample_mean(const Eigen::MatrixXd& returns) {
    if (returns.cols() < 1) throw ValidationError("empty scenario matrix");
    return returns.rowwise().mean();
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& returns) {
    const long l = returns.cols();
    if (l < 2)
        throw ValidationError("sample covariance needs at least 2 scenarios");
    const Eigen::MatrixXd centered = returns.colwise() - returns.rowwise().mean();
    return (centered * centered.transpose()) / static_cast<double>(l - 1);
}

std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& returns,
                                              std::vector<double> q_grid,
                                              bool long_only) {
    if (q_grid.empty()) throw ValidationError("empty risk-tolerance grid");
    for (double q : q_grid)
        if (!(q >= 0.0) || !std::isfinite(q))
            throw ValidationError("risk tolerances must be finite and >= 0");
    check_finite(returns, "scenario matrix");
    std::sort(q_grid.begin(), q_grid.end());

    const Eigen::VectorXd mean = sample_mean(returns);
    const Eigen::MatrixXd cov = sample_covariance(returns);

    std::vector<FrontierPoint> points(q_grid.size());
    parallel_for_indexed(static_cast<int>(q_grid.size()), [&](int k) {
        const Portfolio p = mean_variance_weights(cov, mean, q_grid[k], long_only);
        points[k].q = q_grid[k];
        points[k].weights = p.weights;
        points[k].risk = p.weights.dot(cov * p.weights);
        points[k].ret = mean.dot(p.weights);
    });
    return points;
}

EsResult expected_shortfall(std::span<const double> pnl, double alpha) {
    const long l = static_cast<long>(pnl.size());
    if (l < 1) throw ValidationError("expected shortfall of an empty scenario set");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ValidationError("tail probability must lie in (0, 1)");
    for (double v : pnl)
        if (!std::isfinite(v))
            throw ValidationError("scenario returns have non-finite entries");

    std::vector<double> sorted(pnl.begin(), pnl.end());
    std::sort(sorted.begin(), sorted.end());
    // ceil with a nudge: alpha*l within 1e-12 of an integer counts as exact.
    const long k = static_cast<long>(std::ceil(alpha * static_cast<double>(l) - 1e-12));
    const double quant = sorted[std::max(k, 1L) - 1];

    double tail_sum = 0.0;
    long n_le = 0;
    for (double v : pnl) {
        if (v <= quant) {
            tail_sum += v;
            ++n_le;
        }
    }
    const double p_le = static_cast<double>(n_le) / static_cast<double>(l);
    EsResult res;
    res.alpha = alpha;
    res.var_level = quant;
    res.es = -(tail_sum / static_cast<double>(l) - quant * (p_le - alpha)) / alpha;
    return res;
}

Portfolio minimize_es(const Eigen::MatrixXd& returns, double alpha) {
    const int m = static_cast<int>(returns.rows());
    const long l = returns.cols();
    if (m < 1 || l < 1) throw ValidationError("empty scenario matrix");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ValidationError("tail probability must lie in (0, 1)");
    check_finite(returns, "scenario matrix");

    Portfolio p;
    p.long_only = true;
    p.members.resize(m);
    std::iota(p.members.begin(), p.members.end(), 0);
    if (m == 1) {
        p.weights = Eigen::VectorXd::Ones(1);
        return p;
    }

    // Dual of the hinge-linearized ES program: maximize the worst mixture
    // return over scenario mixtures y with sum(y)=1, 0 <= y <= 1/(alpha L).
    // Solved in min form; the asset-row duals are the optimal weights.
    const double cap = 1.0 / (alpha * static_cast<double>(l));
    const int n_cols = static_cast<int>(l) + 1 + m; // y, objective var, slacks
    LpProblem lp;
    lp.a = Eigen::MatrixXd::Zero(m + 1, n_cols);
    lp.b = Eigen::VectorXd::Zero(m + 1);
    lp.c = Eigen::VectorXd::Zero(n_cols);
    lp.lo = Eigen::VectorXd::Zero(n_cols);
    lp.hi = Eigen::VectorXd::Constant(n_cols, kInf);
    for (int i = 0; i < m; ++i) {
        lp.a.block(i, 0, 1, l) = returns.row(i);
        lp.a(i, l) = 1.0;
        lp.a(i, static_cast<int>(l) + 1 + i) = 1.0;
    }
    lp.a.block(m, 0, 1, l).setOnes();
    lp.b(m) = 1.0;
    lp.c(l) = -1.0;
    lp.lo.head(l).setZero();
    lp.hi.head(l).setConstant(cap);
    lp.lo(l) = -kInf;

    const LpSolution sol = solve_lp(lp, 1e-9);

    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w(i) = -sol.duals(i);
    for (int i = 0; i < m; ++i) {
        if (w(i) < -1e-7)
            throw NumericError("ES optimizer produced a negative weight");
        if (w(i) < 0.0) w(i) = 0.0;
    }
    const double total = w.sum();
    if (std::abs(total - 1.0) > 1e-6)
        throw NumericError("ES optimizer weights violate the budget constraint");
    w /= total;

    // Assets with byte-identical scenario rows are interchangeable; share
    // their group weight equally so ties resolve deterministically.
    std::vector<int> group(m, -1);
    for (int i = 0; i < m; ++i) {
        if (group[i] >= 0) continue;
        group[i] = i;
        for (int j = i + 1; j < m; ++j)
            if (group[j] < 0 &&
                (returns.row(i).array() == returns.row(j).array()).all())
                group[j] = i;
    }
    for (int g = 0; g < m; ++g) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < m; ++i)
            if (group[i] == g) {
                sum += w(i);
                ++count;
            }
        if (count > 1)
            for (int i = 0; i < m; ++i)
                if (group[i] == g) w(i) = sum / count;
    }

    // The dual objective must equal the ES of the recovered weights.
    const Eigen::VectorXd pnl = returns.transpose() * w;
    const EsResult check =
        expected_shortfall(std::span<const double>(pnl.data(), pnl.size()), alpha);
    const double es_lp = -sol.objective;
    if (std::abs(check.es - es_lp) > 1e-6 * std::max(1.0, std::abs(es_lp)))
        throw NumericError("ES optimizer cross-check failed: solver " +
                           std::to_string(es_lp) + " vs evaluated " +
                           std::to_string(check.es));
    p.weights = w;
    return p;
}

std::vector<double> default_q_grid() {
    std::vector<double> grid;
    grid.reserve(50);
    grid.push_back(0.0);
    const double lo = 1e-3, hi = 10.0;
    for (int k = 0; k < 49; ++k)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / 48.0));
    return grid;
}

} // namespace tempnet
