#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlgcp {

enum class Sense : std::uint8_t { greater_equal, less_equal, equal };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Row {
    std::vector<Term> terms;
    Sense sense = Sense::greater_equal;
    double rhs = 0.0;

    double activity(std::span<const double> x) const {
        double s = 0.0;
        for (const Term& t : terms) s += t.coef * x[t.var];
        return s;
    }

    // Amount by which x violates the row; <= 0 when satisfied.
    double violation(std::span<const double> x) const {
        const double a = activity(x);
        switch (sense) {
            case Sense::greater_equal: return rhs - a;
            case Sense::less_equal: return a - rhs;
            case Sense::equal: return std::abs(a - rhs);
        }
        return 0.0;
    }
};

/// Minimization LP over boxed variables: min c'x s.t. rows, lo <= x <= hi.
struct LpProblem {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_variable(double cost, double lo, double hi) {
        objective.push_back(cost);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }

    void add_row(Row r) { rows.push_back(std::move(r)); }

    void validate() const {
        if (lower.size() != objective.size() || upper.size() != objective.size())
            throw std::invalid_argument("bound vectors must match the variable count");
        for (int j = 0; j < num_vars(); ++j)
            if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || lower[j] > upper[j])
                throw std::invalid_argument("variable " + std::to_string(j) + " needs finite bounds lo <= hi");
        for (const Row& r : rows)
            for (const Term& t : r.terms)
                if (t.var < 0 || t.var >= num_vars()) throw std::invalid_argument("row references unknown variable");
    }
};

enum class LpStatus : std::uint8_t { optimal, infeasible };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;
    int iterations = 0;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper };

/// Basis snapshot: one status per structural variable and per row slack.
/// Rows beyond `rows.size()` are treated as basic when the snapshot is loaded.
struct Basis {
    std::vector<VarStatus> columns;
    std::vector<VarStatus> rows;
};

struct SimplexTolerances {
    double primal = 1e-9;       // internal bound feasibility
    double dual = 1e-9;         // reduced cost
    double pivot = 1e-9;        // smallest usable pivot element
    double row_check = 1e-7;    // final row verification
    double bound_check = 1e-9;  // final bound verification
};

/// Bounded-variable primal simplex with an explicit dense basis inverse.
///
/// Every row i is written as a'x - s_i = 0 with the slack s_i carrying the row
/// bounds, so the all-slack basis is always available. Phase 1 minimizes the
/// sum of bound violations of the basic variables. Pricing is Dantzig until
/// 5 * (rows + vars) degenerate pivots have been made, then Bland.
class SimplexSolver {
public:
    explicit SimplexSolver(LpProblem problem) : problem_(std::move(problem)) {
        problem_.validate();
        n_ = problem_.num_vars();
        lo_ = problem_.lower;
        hi_ = problem_.upper;
        cost_ = problem_.objective;
        cols_.assign(static_cast<std::size_t>(n_), {});
        status_.assign(static_cast<std::size_t>(n_), VarStatus::at_lower);
        x_ = lo_;
        m_ = 0;
        std::vector<Row> rows = std::move(problem_.rows);
        problem_.rows.clear();
        append_rows(rows, /*extend_inverse=*/false);
        reset_to_slack_basis();
    }

    const LpProblem& problem() const { return problem_; }
    int num_vars() const { return n_; }
    int num_rows() const { return m_; }
    double lower(int j) const { return lo_[j]; }
    double upper(int j) const { return hi_[j]; }
    long long total_iterations() const { return total_iterations_; }

    void set_bounds(int j, double lo, double hi) {
        if (j < 0 || j >= n_) throw std::out_of_range("variable index out of range");
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) throw std::invalid_argument("bad bounds");
        lo_[j] = lo;
        hi_[j] = hi;
        if (status_[j] == VarStatus::at_lower) x_[j] = lo;
        if (status_[j] == VarStatus::at_upper) x_[j] = hi;
        basics_stale_ = true;
    }

    /// Appends rows. The current basis is kept and the new slacks enter it.
    void add_rows(std::span<const Row> rows) {
        if (rows.empty()) return;
        append_rows(rows, /*extend_inverse=*/true);
    }

    Basis basis() const {
        Basis b;
        b.columns.assign(status_.begin(), status_.begin() + n_);
        b.rows.assign(status_.begin() + n_, status_.end());
        return b;
    }

    /// Loads a basis snapshot; falls back to the slack basis when the
    /// snapshot is inconsistent or singular.
    void set_basis(const Basis& b) {
        if (static_cast<int>(b.columns.size()) != n_ || static_cast<int>(b.rows.size()) > m_) {
            reset_to_slack_basis();
            return;
        }
        std::vector<VarStatus> st(static_cast<std::size_t>(n_ + m_), VarStatus::basic);
        std::copy(b.columns.begin(), b.columns.end(), st.begin());
        std::copy(b.rows.begin(), b.rows.end(), st.begin() + n_);
        int basic = 0;
        for (int k = 0; k < n_ + m_; ++k) {
            if (st[k] == VarStatus::basic) {
                ++basic;
            } else {
                const double bound = st[k] == VarStatus::at_lower ? lo_[k] : hi_[k];
                if (!std::isfinite(bound)) {
                    reset_to_slack_basis();
                    return;
                }
            }
        }
        if (basic != m_) {
            reset_to_slack_basis();
            return;
        }
        status_ = std::move(st);
        head_.clear();
        for (int k = 0; k < n_ + m_; ++k) {
            if (status_[k] == VarStatus::basic)
                head_.push_back(k);
            else
                x_[k] = status_[k] == VarStatus::at_lower ? lo_[k] : hi_[k];
        }
        if (!refactor()) reset_to_slack_basis();
    }

    LpSolution solve() {
        if (basics_stale_) recompute_basics();
        for (int attempt = 0; attempt < 2; ++attempt) {
            const bool bland = attempt > 0;
            if (attempt > 0) reset_to_slack_basis();
            LpSolution out;
            const Outcome r = run(bland, out.iterations);
            total_iterations_ += out.iterations;
            if (r == Outcome::failed) continue;
            if (r == Outcome::infeasible) {
                out.status = LpStatus::infeasible;
                return out;
            }
            out.status = LpStatus::optimal;
            out.values.assign(x_.begin(), x_.begin() + n_);
            bool ok = true;
            for (int j = 0; j < n_; ++j) {
                if (out.values[j] < lo_[j] - tol_.bound_check || out.values[j] > hi_[j] + tol_.bound_check) ok = false;
                out.values[j] = std::clamp(out.values[j], lo_[j], hi_[j]);
            }
            for (const Row& row : problem_.rows)
                if (row.violation(out.values) > tol_.row_check) ok = false;
            if (!ok) continue;
            out.objective = 0.0;
            for (int j = 0; j < n_; ++j) out.objective += cost_[j] * out.values[j];
            return out;
        }
        throw NumericalError("simplex failed to reach a verified optimum after the anti-cycling fallback");
    }

    void reset_to_slack_basis() {
        status_.resize(static_cast<std::size_t>(n_ + m_));
        head_.resize(static_cast<std::size_t>(m_));
        for (int j = 0; j < n_; ++j) {
            status_[j] = VarStatus::at_lower;
            x_[j] = lo_[j];
        }
        for (int i = 0; i < m_; ++i) {
            status_[n_ + i] = VarStatus::basic;
            head_[i] = n_ + i;
        }
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = -1.0;
        recompute_basics();
        since_refactor_ = 0;
    }

private:
    enum class Outcome { optimal, infeasible, failed };

    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }

    void append_rows(std::span<const Row> rows, bool extend_inverse) {
        const int old_m = m_;
        const int add = static_cast<int>(rows.size());
        for (const Row& r : rows)
            for (const Term& t : r.terms)
                if (t.var < 0 || t.var >= n_) throw std::invalid_argument("row references unknown variable");

        // Slack variables are appended after all existing variables; shift
        // nothing since structurals occupy [0, n) and slacks [n, n + m).
        for (int k = 0; k < add; ++k) {
            const Row& r = rows[k];
            const int i = old_m + k;
            double lo = -kInf, hi = kInf;
            if (r.sense != Sense::less_equal) lo = r.rhs;
            if (r.sense != Sense::greater_equal) hi = r.rhs;
            lo_.push_back(lo);
            hi_.push_back(hi);
            cost_.push_back(0.0);
            for (const Term& t : r.terms)
                if (t.coef != 0.0) cols_[t.var].push_back({i, t.coef});
            problem_.rows.push_back(r);
        }
        m_ = old_m + add;
        x_.resize(static_cast<std::size_t>(n_ + m_), 0.0);
        status_.resize(static_cast<std::size_t>(n_ + m_), VarStatus::basic);

        if (!extend_inverse) return;

        // [B 0; r_B -1]^{-1} = [B^{-1} 0; r_B B^{-1} -1]
        std::vector<double> next(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int r = 0; r < old_m; ++r)
            for (int c = 0; c < old_m; ++c) next[static_cast<std::size_t>(r) * m_ + c] = binv_[static_cast<std::size_t>(r) * old_m + c];
        std::vector<int> pos(static_cast<std::size_t>(n_), -1);
        for (int r = 0; r < old_m; ++r)
            if (head_[r] < n_) pos[head_[r]] = r;
        for (int k = 0; k < add; ++k) {
            const int i = old_m + k;
            double* out = &next[static_cast<std::size_t>(i) * m_];
            for (const Term& t : rows[k].terms) {
                const int r = pos[t.var];
                if (r < 0) continue;
                const double* src = &binv_[static_cast<std::size_t>(r) * old_m];
                for (int c = 0; c < old_m; ++c) out[c] += t.coef * src[c];
            }
            out[i] = -1.0;
            head_.push_back(n_ + i);
            status_[n_ + i] = VarStatus::basic;
            x_[n_ + i] = rows[k].activity(std::span<const double>(x_.data(), static_cast<std::size_t>(n_)));
        }
        binv_ = std::move(next);
    }

    // Dense column of variable k in [A | -I].
    void column(int k, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (k < n_) {
            for (auto [r, a] : cols_[k]) out[r] = a;
        } else {
            out[k - n_] = -1.0;
        }
    }

    // alpha = B^{-1} a_k
    void ftran(int k, std::vector<double>& alpha) const {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        if (k < n_) {
            for (auto [c, a] : cols_[k])
                for (int r = 0; r < m_; ++r) alpha[r] += binv_[idx(r, c)] * a;
        } else {
            const int c = k - n_;
            for (int r = 0; r < m_; ++r) alpha[r] = -binv_[idx(r, c)];
        }
    }

    // With S the basic structurals and R-bar the rows whose slack is nonbasic,
    // B^{-1} only needs K^{-1} for the square block K = A[R-bar, S]:
    //   structural rows of B^{-1}:  K^{-1} on the R-bar columns
    //   slack row of row i in R:    A[i, S] K^{-1} on the R-bar columns, -1 at i
    bool refactor() {
        since_refactor_ = 0;
        basics_stale_ = false;
        if (m_ == 0) {
            binv_.clear();
            return true;
        }
        std::vector<int> structural_pos;  // basis positions holding structurals
        std::vector<int> slack_pos(static_cast<std::size_t>(m_), -1);
        for (int r = 0; r < m_; ++r) {
            if (head_[r] < n_)
                structural_pos.push_back(r);
            else
                slack_pos[head_[r] - n_] = r;
        }
        std::vector<int> tight_rows;  // R-bar
        std::vector<int> tight_index(static_cast<std::size_t>(m_), -1);
        for (int i = 0; i < m_; ++i)
            if (slack_pos[i] < 0) {
                tight_index[i] = static_cast<int>(tight_rows.size());
                tight_rows.push_back(i);
            }
        const int k = static_cast<int>(structural_pos.size());
        if (static_cast<int>(tight_rows.size()) != k) return false;

        // Gauss-Jordan on [K | I] with partial pivoting; kinv ends up as K^{-1}.
        std::vector<double> kmat(static_cast<std::size_t>(k) * k, 0.0), kinv(static_cast<std::size_t>(k) * k, 0.0);
        auto at = [k](int r, int c) { return static_cast<std::size_t>(r) * k + c; };
        for (int b = 0; b < k; ++b)
            for (auto [row, a] : cols_[head_[structural_pos[b]]])
                if (tight_index[row] >= 0) kmat[at(tight_index[row], b)] = a;
        for (int i = 0; i < k; ++i) kinv[at(i, i)] = 1.0;
        for (int c = 0; c < k; ++c) {
            int piv = c;
            for (int i = c + 1; i < k; ++i)
                if (std::abs(kmat[at(i, c)]) > std::abs(kmat[at(piv, c)])) piv = i;
            if (std::abs(kmat[at(piv, c)]) < 1e-11) return false;
            if (piv != c)
                for (int q = 0; q < k; ++q) {
                    std::swap(kmat[at(piv, q)], kmat[at(c, q)]);
                    std::swap(kinv[at(piv, q)], kinv[at(c, q)]);
                }
            const double p = kmat[at(c, c)];
            for (int q = 0; q < k; ++q) {
                kmat[at(c, q)] /= p;
                kinv[at(c, q)] /= p;
            }
            for (int i = 0; i < k; ++i) {
                if (i == c) continue;
                const double f = kmat[at(i, c)];
                if (f == 0.0) continue;
                for (int q = 0; q < k; ++q) {
                    kmat[at(i, q)] -= f * kmat[at(c, q)];
                    kinv[at(i, q)] -= f * kinv[at(c, q)];
                }
            }
        }
        // K x = b  =>  x_b = sum_a kinv[b][a] b_a, where column b of K is structural_pos[b].
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int b = 0; b < k; ++b) {
            double* row = &binv_[idx(structural_pos[b], 0)];
            for (int a = 0; a < k; ++a) row[tight_rows[a]] = kinv[at(b, a)];
        }
        for (int i = 0; i < m_; ++i)
            if (slack_pos[i] >= 0) binv_[idx(slack_pos[i], i)] = -1.0;
        for (int b = 0; b < k; ++b)
            for (auto [row, a] : cols_[head_[structural_pos[b]]]) {
                if (slack_pos[row] < 0) continue;
                double* out = &binv_[idx(slack_pos[row], 0)];
                for (int q = 0; q < k; ++q) out[tight_rows[q]] += a * kinv[at(b, q)];
            }
        recompute_basics();
        return true;
    }

    // x_B = B^{-1} (-N x_N)
    void recompute_basics() {
        std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < n_; ++j) {
            if (status_[j] == VarStatus::basic || x_[j] == 0.0) continue;
            for (auto [r, a] : cols_[j]) rhs[r] -= a * x_[j];
        }
        for (int i = 0; i < m_; ++i)
            if (status_[n_ + i] != VarStatus::basic) rhs[i] += x_[n_ + i];
        for (int r = 0; r < m_; ++r) {
            double v = 0.0;
            for (int c = 0; c < m_; ++c) v += binv_[idx(r, c)] * rhs[c];
            x_[head_[r]] = v;
        }
        basics_stale_ = false;
    }

    Outcome run(bool bland, int& iterations) {
        const int total = n_ + m_;
        const long long iteration_limit = 100LL * (n_ + m_) + 1000;
        const long long degenerate_limit = 5LL * (n_ + m_);
        long long degenerate = 0;
        int verify_rounds = 0;
        std::vector<double> cb(static_cast<std::size_t>(m_)), y(static_cast<std::size_t>(m_)),
            alpha(static_cast<std::size_t>(m_));

        for (;;) {
            if (iterations > iteration_limit) return Outcome::failed;
            if (since_refactor_ >= kRefactorInterval) {
                if (!refactor()) return Outcome::failed;
            }

            bool phase1 = false;
            for (int r = 0; r < m_; ++r) {
                const int b = head_[r];
                const double v = x_[b];
                cb[r] = 0.0;
                if (v < lo_[b] - tol_.primal) {
                    cb[r] = -1.0;
                    phase1 = true;
                } else if (v > hi_[b] + tol_.primal) {
                    cb[r] = 1.0;
                    phase1 = true;
                }
            }
            if (!phase1)
                for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];

            std::fill(y.begin(), y.end(), 0.0);
            for (int r = 0; r < m_; ++r) {
                if (cb[r] == 0.0) continue;
                const double* row = &binv_[idx(r, 0)];
                for (int c = 0; c < m_; ++c) y[c] += cb[r] * row[c];
            }

            int entering = -1;
            double best = 0.0;
            for (int k = 0; k < total; ++k) {
                const VarStatus st = status_[k];
                if (st == VarStatus::basic || lo_[k] == hi_[k]) continue;
                double d = phase1 ? 0.0 : cost_[k];
                if (k < n_) {
                    for (auto [r, a] : cols_[k]) d -= y[r] * a;
                } else {
                    d += y[k - n_];
                }
                const bool improving =
                    (st == VarStatus::at_lower && d < -tol_.dual) || (st == VarStatus::at_upper && d > tol_.dual);
                if (!improving) continue;
                if (bland) {
                    entering = k;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    entering = k;
                }
            }

            if (entering < 0) {
                // Guard against drift before declaring the outcome.
                if (since_refactor_ > 0 && verify_rounds < 3) {
                    ++verify_rounds;
                    const std::vector<double> before(x_.begin(), x_.end());
                    recompute_basics();
                    double drift = 0.0;
                    for (int r = 0; r < m_; ++r) drift = std::max(drift, std::abs(x_[head_[r]] - before[head_[r]]));
                    if (drift > tol_.primal) continue;
                }
                return phase1 ? Outcome::infeasible : Outcome::optimal;
            }

            const double dir = status_[entering] == VarStatus::at_lower ? 1.0 : -1.0;
            ftran(entering, alpha);

            double step = hi_[entering] - lo_[entering];
            int leave = -1;
            double leave_value = 0.0;
            for (int r = 0; r < m_; ++r) {
                if (std::abs(alpha[r]) <= tol_.pivot) continue;
                const double delta = -dir * alpha[r];
                const int b = head_[r];
                const double v = x_[b];
                double target = 0.0;
                if (delta < 0.0) {
                    if (v > hi_[b] + tol_.primal)
                        target = hi_[b];
                    else if (v >= lo_[b] - tol_.primal && std::isfinite(lo_[b]))
                        target = lo_[b];
                    else
                        continue;
                } else {
                    if (v < lo_[b] - tol_.primal)
                        target = lo_[b];
                    else if (v <= hi_[b] + tol_.primal && std::isfinite(hi_[b]))
                        target = hi_[b];
                    else
                        continue;
                }
                const double t = std::max(0.0, (target - v) / delta);
                bool take = false;
                if (t < step - 1e-12) {
                    take = true;
                } else if (t <= step + 1e-12 && leave >= 0) {
                    take = bland ? b < head_[leave] : std::abs(alpha[r]) > std::abs(alpha[leave]);
                }
                if (take) {
                    step = std::min(step, t);
                    leave = r;
                    leave_value = target;
                }
            }
            if (!std::isfinite(step)) return Outcome::failed;  // boxed problems cannot be unbounded

            ++iterations;
            if (step <= 1e-12) {
                if (++degenerate >= degenerate_limit) bland = true;
            }

            x_[entering] += dir * step;
            for (int r = 0; r < m_; ++r)
                if (alpha[r] != 0.0) x_[head_[r]] -= dir * alpha[r] * step;

            if (leave < 0) {
                status_[entering] = status_[entering] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
                x_[entering] = status_[entering] == VarStatus::at_lower ? lo_[entering] : hi_[entering];
                continue;
            }

            const int leaving = head_[leave];
            x_[leaving] = leave_value;
            status_[leaving] = leave_value == lo_[leaving] ? VarStatus::at_lower : VarStatus::at_upper;
            status_[entering] = VarStatus::basic;
            head_[leave] = entering;

            const double p = alpha[leave];
            double* prow = &binv_[idx(leave, 0)];
            for (int c = 0; c < m_; ++c) prow[c] /= p;
            for (int r = 0; r < m_; ++r) {
                if (r == leave || alpha[r] == 0.0) continue;
                const double f = alpha[r];
                double* row = &binv_[idx(r, 0)];
                for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
            }
            ++since_refactor_;
        }
    }

    static constexpr double kInf = std::numeric_limits<double>::infinity();
    static constexpr int kRefactorInterval = 100;

    LpProblem problem_;
    SimplexTolerances tol_;
    int n_ = 0;
    int m_ = 0;
    std::vector<double> lo_, hi_, cost_, x_;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<VarStatus> status_;
    std::vector<int> head_;
    std::vector<double> binv_;
    int since_refactor_ = 0;
    bool basics_stale_ = false;
    long long total_iterations_ = 0;
};

inline LpSolution lp_solve(const LpProblem& p, const Basis* warm_hint = nullptr) {
    SimplexSolver solver(p);
    if (warm_hint) solver.set_basis(*warm_hint);
    return solver.solve();
}

/// Adds rows to a solver that already holds a solved problem and re-solves
/// from the previous basis.
inline LpSolution add_rows_and_resolve(SimplexSolver& solver, std::span<const Row> new_rows) {
    solver.add_rows(new_rows);
    return solver.solve();
}

/// Writes the problem in CPLEX LP text format.
inline void write_lp_format(std::ostream& out, const LpProblem& p, std::span<const int> integer_vars = {}) {
    auto name = [](int j) { return "x" + std::to_string(j); };
    auto term = [&](double c, int j, bool first) {
        std::string s;
        if (c < 0)
            s += first ? "- " : " - ";
        else if (!first)
            s += " + ";
        const double a = std::abs(c);
        if (a != 1.0) s += std::to_string(a) + " ";
        return s + name(j);
    };
    out << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < p.num_vars(); ++j) {
        if (p.objective[j] == 0.0) continue;
        out << (first ? " " : "") << term(p.objective[j], j, first);
        first = false;
    }
    if (first) out << " 0 x0";
    out << "\nSubject To\n";
    for (int i = 0; i < p.num_rows(); ++i) {
        const Row& r = p.rows[i];
        out << " r" << i << ":";
        bool f = true;
        for (const Term& t : r.terms) {
            out << (f ? " " : "") << term(t.coef, t.var, f);
            f = false;
        }
        if (f) out << " 0 x0";
        out << (r.sense == Sense::greater_equal ? " >= " : r.sense == Sense::less_equal ? " <= " : " = ") << r.rhs
            << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < p.num_vars(); ++j) out << ' ' << p.lower[j] << " <= " << name(j) << " <= " << p.upper[j] << '\n';
    if (!integer_vars.empty()) {
        out << "Generals\n";
        for (int j : integer_vars) out << ' ' << name(j) << '\n';
    }
    out << "End\n";
}

}  // namespace mlgcp
