#include "symschrod/matrix.hpp"

#include <algorithm>

#include "symschrod/error.hpp"

namespace symschrod {

void RationalMatrix::set(std::size_t r, std::size_t c, GaussianRational v) {
    if (v.is_zero())
        rows_[r].erase(c);
    else
        rows_[r][c] = std::move(v);
}

void RationalMatrix::add(std::size_t r, std::size_t c, const GaussianRational& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = rows_[r].emplace(c, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) rows_[r].erase(it);
    }
}

GaussianRational RationalMatrix::get(std::size_t r, std::size_t c) const {
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? GaussianRational() : it->second;
}

std::size_t RationalMatrix::append_row() {
    rows_.emplace_back();
    return rows_.size() - 1;
}

ExactVector RationalMatrix::apply(const ExactVector& v) const {
    if (v.size() != cols_) throw Error(ErrorKind::BadArgument, "apply: vector size mismatch");
    ExactVector out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        GaussianRational s;
        for (const auto& [c, a] : rows_[r]) s += a * v[c];
        out[r] = std::move(s);
    }
    return out;
}

RrefResult rref_nullspace(const RationalMatrix& a) {
    // Work rows as sparse maps; full reduced row echelon form with pivots
    // chosen in column order, so the result is canonical across runs.
    std::vector<std::map<std::size_t, GaussianRational>> work;
    work.reserve(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (!a.row(r).empty()) work.push_back(a.row(r));
    }

    const std::size_t ncols = a.cols();
    std::vector<std::size_t> pivot_cols;
    std::vector<std::map<std::size_t, GaussianRational>> reduced;  // pivot rows in order

    while (!work.empty()) {
        // Find the row whose leading column is smallest; among ties prefer
        // the sparsest row to limit fill-in (result is still canonical:
        // the rref of a matrix does not depend on the elimination order).
        std::size_t best = work.size();
        std::size_t best_col = ncols;
        std::size_t best_nnz = 0;
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (work[r].empty()) continue;
            std::size_t lead = work[r].begin()->first;
            if (lead < best_col || (lead == best_col && work[r].size() < best_nnz)) {
                best = r;
                best_col = lead;
                best_nnz = work[r].size();
            }
        }
        if (best == work.size()) break;  // all rows zero

        auto piv = std::move(work[best]);
        work[best] = std::move(work.back());
        work.pop_back();

        // Normalize pivot row.
        GaussianRational inv = piv.begin()->second.inverse();
        for (auto& [c, v] : piv) v *= inv;

        // Eliminate from remaining rows.
        for (auto& row : work) {
            auto it = row.find(best_col);
            if (it == row.end()) continue;
            GaussianRational f = it->second;
            for (const auto& [c, v] : piv) {
                auto [jt, inserted] = row.emplace(c, -(f * v));
                if (!inserted) {
                    jt->second -= f * v;
                    if (jt->second.is_zero()) row.erase(jt);
                }
            }
        }
        pivot_cols.push_back(best_col);
        reduced.push_back(std::move(piv));
    }

    // Sort pivot rows by pivot column and back-substitute to full rref.
    std::vector<std::size_t> order(reduced.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return pivot_cols[i] < pivot_cols[j]; });
    std::vector<std::map<std::size_t, GaussianRational>> rr;
    std::vector<std::size_t> pcols;
    for (std::size_t i : order) {
        rr.push_back(std::move(reduced[i]));
        pcols.push_back(pivot_cols[i]);
    }
    for (std::size_t i = rr.size(); i-- > 0;) {
        for (std::size_t j = 0; j < i; ++j) {
            auto it = rr[j].find(pcols[i]);
            if (it == rr[j].end()) continue;
            GaussianRational f = it->second;
            for (const auto& [c, v] : rr[i]) {
                auto [jt, inserted] = rr[j].emplace(c, -(f * v));
                if (!inserted) {
                    jt->second -= f * v;
                    if (jt->second.is_zero()) rr[j].erase(jt);
                }
            }
        }
    }

    RrefResult res;
    res.rank = rr.size();
    res.pivot_cols = pcols;

    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t c : pcols) is_pivot[c] = true;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        ExactVector v(ncols);
        v[f] = GaussianRational(1);
        for (std::size_t i = 0; i < rr.size(); ++i) {
            auto it = rr[i].find(f);
            if (it != rr[i].end()) v[pcols[i]] = -it->second;
        }
        res.nullspace.push_back(std::move(v));
    }
    return res;
}

bool is_zero_vector(const ExactVector& v) {
    return std::all_of(v.begin(), v.end(), [](const GaussianRational& x) { return x.is_zero(); });
}

}  // namespace symschrod
