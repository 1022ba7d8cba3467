#include "nsbox/simplex.hpp"

#include "nsbox/errors.hpp"

namespace nsbox::lp {

void Problem::add_row(std::vector<Rational> coeffs, Rational b) {
    if (coeffs.size() != num_vars)
        fail(Errc::shape_mismatch, "LP row width does not match num_vars");
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(b));
}

namespace {

class Tableau {
  public:
    Tableau(const Problem& p)
        : n_(p.num_vars), m_(p.rows.size()), flip_(m_, false), basis_(m_),
          t_(m_, std::vector<Rational>(n_ + m_, Rational(0))), b_(m_, Rational(0)),
          obj_(n_ + m_, Rational(0)), obj_rhs_(0) {
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = p.rhs[i] < 0;
            flip_[i] = flip;
            for (std::size_t j = 0; j < n_; ++j)
                t_[i][j] = flip ? -p.rows[i][j] : p.rows[i][j];
            b_[i] = flip ? -p.rhs[i] : p.rhs[i];
            t_[i][n_ + i] = 1;
            basis_[i] = n_ + i;
        }
    }

    // Phase I: minimize the artificial sum. Returns true when it reaches 0.
    bool phase_one() {
        // Reduced costs for cost vector (0,...,0,1,...,1) under the
        // all-artificial basis.
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            Rational r = j >= n_ ? Rational(1) : Rational(0);
            for (std::size_t i = 0; i < m_; ++i)
                r -= t_[i][j];
            obj_[j] = r;
        }
        obj_rhs_ = 0;
        for (std::size_t i = 0; i < m_; ++i)
            obj_rhs_ -= b_[i];

        run(/*allow_artificial_entering=*/false);
        if (-obj_rhs_ != 0)
            return false;
        purge_artificials();
        return true;
    }

    // Degenerate pivots driving leftover zero-valued artificials out of the
    // basis. A row whose real columns are all zero is redundant and inert: no
    // later pivot can touch it.
    void purge_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_)
                continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (t_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    // Replace the objective with the real one and optimize. Artificial
    // variables stay pinned at zero (they may remain basic in redundant rows
    // but are never allowed to enter).
    Status phase_two(const std::vector<Rational>& cost) {
        for (std::size_t j = 0; j < n_ + m_; ++j)
            obj_[j] = j < n_ && j < cost.size() ? cost[j] : Rational(0);
        obj_rhs_ = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t bj = basis_[i];
            if (bj < n_ && bj < cost.size() && cost[bj] != 0) {
                const Rational c = cost[bj];
                for (std::size_t j = 0; j < n_ + m_; ++j)
                    obj_[j] -= c * t_[i][j];
                obj_rhs_ -= c * b_[i];
            }
        }
        return run(false);
    }

    std::vector<Rational> primal() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_)
                x[basis_[i]] = b_[i];
        return x;
    }

    // Farkas certificate from the optimal phase-one duals, mapped back
    // through the row sign flips.
    std::vector<Rational> farkas() const {
        std::vector<Rational> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            y[i] = Rational(1) - obj_[n_ + i];
            if (flip_[i])
                y[i] = -y[i];
        }
        return y;
    }

    // Phase-two dual prices: the artificial column i carries cost 0, so its
    // reduced cost is -y_i in the flipped system.
    std::vector<Rational> duals() const {
        std::vector<Rational> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            y[i] = -obj_[n_ + i];
            if (flip_[i])
                y[i] = -y[i];
        }
        return y;
    }

  private:
    Status run(bool allow_artificial_entering) {
        const std::size_t cols = allow_artificial_entering ? n_ + m_ : n_;
        for (;;) {
            // Bland: smallest improving column index.
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols)
                return Status::optimal;

            // Ratio test; ties broken by smallest basis variable index.
            std::size_t leave = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0)
                    continue;
                if (leave == m_) {
                    leave = i;
                    continue;
                }
                // b_i / t_ie < b_l / t_le  <=>  b_i * t_le < b_l * t_ie
                const Rational lhs = b_[i] * t_[leave][enter];
                const Rational rhs = b_[leave] * t_[i][enter];
                if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave]))
                    leave = i;
            }
            if (leave == m_)
                return Status::unbounded;

            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational p = t_[row][col];
        for (auto& v : t_[row])
            v /= p;
        b_[row] /= p;
        t_[row][col] = 1; // avoid p/p residue issues; exact anyway

        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || t_[i][col] == 0)
                continue;
            const Rational f = t_[i][col];
            for (std::size_t j = 0; j < n_ + m_; ++j)
                if (t_[row][j] != 0)
                    t_[i][j] -= f * t_[row][j];
            b_[i] -= f * b_[row];
            t_[i][col] = 0;
        }
        if (obj_[col] != 0) {
            const Rational f = obj_[col];
            for (std::size_t j = 0; j < n_ + m_; ++j)
                if (t_[row][j] != 0)
                    obj_[j] -= f * t_[row][j];
            obj_rhs_ -= f * b_[row];
            obj_[col] = 0;
        }
        basis_[row] = col;
    }

    std::size_t n_;
    std::size_t m_;
    std::vector<bool> flip_;
    std::vector<std::size_t> basis_;
    std::vector<std::vector<Rational>> t_;
    std::vector<Rational> b_;
    std::vector<Rational> obj_;
    Rational obj_rhs_;
};

} // namespace

Solution solve(const Problem& problem) {
    if (problem.rows.size() != problem.rhs.size())
        fail(Errc::shape_mismatch, "LP rows/rhs length mismatch");
    for (const auto& row : problem.rows)
        if (row.size() != problem.num_vars)
            fail(Errc::shape_mismatch, "LP row width mismatch");
    if (!problem.objective.empty() && problem.objective.size() != problem.num_vars)
        fail(Errc::shape_mismatch, "LP objective width mismatch");

    Tableau tab(problem);
    Solution sol;

    if (!tab.phase_one()) {
        sol.status = Status::infeasible;
        sol.farkas = tab.farkas();
        return sol;
    }

    std::vector<Rational> cost = problem.objective;
    if (cost.empty())
        cost.assign(problem.num_vars, Rational(0));
    const Status st = tab.phase_two(cost);
    sol.status = st;
    if (st == Status::optimal) {
        sol.duals = tab.duals();
        sol.x = tab.primal();
        Rational v = 0;
        for (std::size_t j = 0; j < problem.num_vars; ++j)
            if (cost[j] != 0)
                v += cost[j] * sol.x[j];
        sol.objective_value = v;
    }
    return sol;
}

} // namespace nsbox::lp
