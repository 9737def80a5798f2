// Self-contained dense phase-one/phase-two simplex with Bland's rule,
// templated over the scalar type (exact rationals or doubles). All decision
// variables are nonnegative; rows are <=, >=, or =.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spinsys/error.hpp"

namespace spinsys {

enum class RowType { le, ge, eq };

template <class T>
struct DenseLP {
    int nvars = 0;
    struct Row {
        std::vector<std::pair<int, T>> coef;
        RowType type = RowType::le;
        T rhs{};
    };
    std::vector<Row> rows;

    void add_row(std::vector<std::pair<int, T>> coef, RowType type, T rhs) {
        rows.push_back({std::move(coef), type, std::move(rhs)});
    }
};

// zero tolerance: exact types compare against 0 directly; specialize for
// double via the tol parameter.
template <class T>
class Simplex {
  public:
    Simplex(const DenseLP<T>& lp, T tol = T(0)) : tol_(tol) { build(lp); }

    // Phase one; true iff the LP has a feasible point.
    bool feasible() {
        if (!ran_phase1_) run_phase1();
        return feasible_;
    }

    // max of sum obj_i * x_i over the feasible region; call after feasible().
    // nullopt when unbounded.
    std::optional<T> maximize(const std::vector<std::pair<int, T>>& obj) {
        if (!feasible()) fail(ErrorClass::solver, "maximize on infeasible LP");
        std::vector<T> z(ncols_ + 1, T(0));
        for (auto& [j, c] : obj) z[j] = z[j] - c;
        // express objective in terms of the current basis
        for (int i = 0; i < m_; ++i) {
            T cb = T(0);
            for (auto& [j, c] : obj)
                if (j == basis_[i]) cb = c;
            if (!neq0(cb)) continue;
            for (int j = 0; j <= ncols_; ++j) z[j] = z[j] + cb * a_[i][j];
        }
        if (!iterate(z)) return std::nullopt;
        return z[ncols_];
    }

    std::optional<T> minimize(const std::vector<std::pair<int, T>>& obj) {
        std::vector<std::pair<int, T>> neg = obj;
        for (auto& [j, c] : neg) c = -c;
        auto r = maximize(neg);
        if (!r) return std::nullopt;
        return -*r;
    }

  private:
    bool neq0(const T& x) const { return x > tol_ || x < -tol_; }
    bool pos(const T& x) const { return x > tol_; }
    bool neg(const T& x) const { return x < -tol_; }

    void build(const DenseLP<T>& lp) {
        m_ = static_cast<int>(lp.rows.size());
        nstruct_ = lp.nvars;
        // count extra columns
        int extra = 0;
        for (const auto& r : lp.rows) {
            bool flip = r.rhs < T(0);
            RowType t = r.type;
            if (flip && t != RowType::eq) t = t == RowType::le ? RowType::ge : RowType::le;
            extra += t == RowType::ge ? 2 : 1; // surplus+artificial, or slack/artificial
        }
        ncols_ = nstruct_ + extra;
        a_.assign(m_, std::vector<T>(ncols_ + 1, T(0)));
        basis_.assign(m_, -1);
        artificial_.assign(ncols_, 0);
        int next = nstruct_;
        for (int i = 0; i < m_; ++i) {
            const auto& r = lp.rows[i];
            T sgn = r.rhs < T(0) ? T(-1) : T(1);
            for (auto& [j, c] : r.coef) a_[i][j] = a_[i][j] + sgn * c;
            a_[i][ncols_] = sgn * r.rhs;
            RowType t = r.type;
            if (r.rhs < T(0) && t != RowType::eq) t = t == RowType::le ? RowType::ge : RowType::le;
            if (t == RowType::le) {
                a_[i][next] = T(1); // slack, starts basic
                basis_[i] = next++;
            } else if (t == RowType::ge) {
                a_[i][next] = T(-1); // surplus
                ++next;
                a_[i][next] = T(1); // artificial
                artificial_[next] = 1;
                basis_[i] = next++;
            } else {
                a_[i][next] = T(1); // artificial
                artificial_[next] = 1;
                basis_[i] = next++;
            }
        }
    }

    void pivot(int r, int c) {
        T piv = a_[r][c];
        for (int j = 0; j <= ncols_; ++j) a_[r][j] = a_[r][j] / piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            T f = a_[i][c];
            if (!neq0(f)) {
                a_[i][c] = T(0);
                continue;
            }
            for (int j = 0; j <= ncols_; ++j) a_[i][j] = a_[i][j] - f * a_[r][j];
            a_[i][c] = T(0);
        }
        basis_[r] = c;
    }

    // Bland's rule iteration on objective row z (length ncols_+1, stores
    // current objective value at z[ncols_], maximization with reduced costs
    // negative when improving). Returns false if unbounded.
    bool iterate(std::vector<T>& z) {
        long long guard = 4096 + 64LL * (m_ + 1) * (ncols_ + 1);
        while (true) {
            if (--guard < 0) fail(ErrorClass::solver, "simplex iteration cap hit");
            int enter = -1;
            for (int j = 0; j < ncols_; ++j)
                if (!dead_[j] && neg(z[j])) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            for (int i = 0; i < m_; ++i) {
                if (!pos(a_[i][enter])) continue;
                if (leave < 0) {
                    leave = i;
                    continue;
                }
                T lhs = a_[i][ncols_] * a_[leave][enter];
                T rhs = a_[leave][ncols_] * a_[i][enter];
                if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            // refresh objective row
            T f = z[enter];
            if (neq0(f))
                for (int j = 0; j <= ncols_; ++j) z[j] = z[j] - f * a_[leave][j];
            z[enter] = T(0);
        }
    }

    void run_phase1() {
        ran_phase1_ = true;
        dead_.assign(ncols_, 0);
        // maximize -(sum of artificials)
        std::vector<T> z(ncols_ + 1, T(0));
        for (int j = 0; j < ncols_; ++j)
            if (artificial_[j]) z[j] = T(1);
        for (int i = 0; i < m_; ++i)
            if (artificial_[basis_[i]])
                for (int j = 0; j <= ncols_; ++j) z[j] = z[j] - a_[i][j];
        if (!iterate(z)) fail(ErrorClass::solver, "phase one unbounded");
        // optimum of -(sum art) is at z[ncols_] (negated objective value)
        T opt = -z[ncols_];
        feasible_ = !pos(opt) && !neg(opt);
        if (!feasible_) return;
        // pivot remaining artificials out where possible, then retire them
        for (int i = 0; i < m_; ++i) {
            if (!artificial_[basis_[i]]) continue;
            int c = -1;
            for (int j = 0; j < nstruct_ && c < 0; ++j)
                if (!artificial_[j] && neq0(a_[i][j])) c = j;
            for (int j = nstruct_; j < ncols_ && c < 0; ++j)
                if (!artificial_[j] && neq0(a_[i][j])) c = j;
            if (c >= 0) pivot(i, c); // basic at zero level, pivot is degenerate
        }
        for (int j = 0; j < ncols_; ++j)
            if (artificial_[j]) dead_[j] = 1;
    }

    int m_ = 0, nstruct_ = 0, ncols_ = 0;
    T tol_{};
    std::vector<std::vector<T>> a_;
    std::vector<int> basis_;
    std::vector<char> artificial_, dead_;
    bool ran_phase1_ = false;
    bool feasible_ = false;
};

} // namespace spinsys
