#pragma once

#include <string>
#include <vector>

#include "canproj/freemodule.hpp"
#include "canproj/ideal.hpp"
#include "canproj/linalg.hpp"

namespace canproj {

/// Twists of the dual module shifted: summand i gets shift - twist_i.
inline GradedFreeModule dual_module(const GradedFreeModule& m, Twist shift) {
    std::vector<Twist> tw;
    tw.reserve(m.twists.size());
    for (const auto& t : m.twists) tw.push_back(twist_sub(shift, t));
    return GradedFreeModule(m.ring, tw);
}

/// Homogeneous map of graded free modules, stored as a dense entry grid.
/// Entry (i,j): component of source summand j landing in target summand i,
/// of degree target.twist_i - source.twist_j when nonzero.
template <class K> class FormMatrix {
public:
    FormMatrix() = default;
    FormMatrix(GradedFreeModule source, GradedFreeModule target,
               std::vector<std::vector<Poly<K>>> entries)
        : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
        if (!source_.ring->compatible(*target_.ring))
            throw StructureError("matrix source and target live in different rings");
        if (entries_.size() != target_.rank())
            throw StructureError("matrix row count does not match target rank");
        for (const auto& row : entries_)
            if (row.size() != source_.rank())
                throw StructureError("matrix column count does not match source rank");
    }

    static FormMatrix zero(const GradedFreeModule& source, const GradedFreeModule& target) {
        std::vector<std::vector<Poly<K>>> e(
            target.rank(), std::vector<Poly<K>>(source.rank(), Poly<K>::zero(source.ring)));
        return FormMatrix(source, target, std::move(e));
    }
    static FormMatrix identity(const GradedFreeModule& m) {
        FormMatrix r = zero(m, m);
        for (std::size_t i = 0; i < m.rank(); ++i)
            r.entries_[i][i] = Poly<K>::from_int(m.ring, 1);
        return r;
    }

    const GradedFreeModule& source() const { return source_; }
    const GradedFreeModule& target() const { return target_; }
    std::size_t rows() const { return target_.rank(); }
    std::size_t cols() const { return source_.rank(); }
    const Poly<K>& entry(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
    Poly<K>& entry_mut(std::size_t i, std::size_t j) { return entries_.at(i).at(j); }
    const RingPtr& ring() const { return source_.ring; }

    Twist entry_degree(std::size_t i, std::size_t j) const {
        return twist_sub(target_.twists[i], source_.twists[j]);
    }

    /// Homogeneity violations, 1-indexed positions; empty means valid.
    std::vector<std::string> validate() const {
        std::vector<std::string> report;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                const Poly<K>& e = entries_[i][j];
                if (e.is_zero()) continue;
                Twist want = entry_degree(i, j);
                std::string pos = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                if (!e.is_homogeneous()) {
                    report.push_back(pos + ": not homogeneous");
                    continue;
                }
                auto d = e.graded_degree();
                if (d[0] != want[0] || d[1] != want[1])
                    report.push_back(pos + ": degree " + degree_string({d[0], d[1]}) +
                                     ", expected " + degree_string(want));
            }
        return report;
    }
    bool valid() const { return validate().empty(); }

    bool operator==(const FormMatrix& o) const {
        return source_ == o.source_ && target_ == o.target_ && entries_ == o.entries_;
    }

    FormMatrix operator+(const FormMatrix& o) const {
        check_shape(o);
        FormMatrix r = *this;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r.entries_[i][j] = r.entries_[i][j] + o.entries_[i][j];
        return r;
    }
    FormMatrix operator-(const FormMatrix& o) const {
        check_shape(o);
        FormMatrix r = *this;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r.entries_[i][j] = r.entries_[i][j] - o.entries_[i][j];
        return r;
    }
    FormMatrix times_scalar(const K& c) const {
        FormMatrix r = *this;
        for (auto& row : r.entries_)
            for (auto& e : row) e = e.times_scalar(c);
        return r;
    }

    /// this after other: (this . other)(x) = this(other(x)).
    FormMatrix compose(const FormMatrix& other) const {
        if (!(other.target_ == source_))
            throw StructureError("composition shape mismatch: source does not match target");
        FormMatrix r = zero(other.source_, target_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t k = 0; k < cols(); ++k) {
                if (entries_[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < other.cols(); ++j) {
                    if (other.entries_[k][j].is_zero()) continue;
                    r.entries_[i][j] = r.entries_[i][j] + entries_[i][k] * other.entries_[k][j];
                }
            }
        return r;
    }

    FreeModuleElement<K> apply(const FreeModuleElement<K>& v) const {
        if (!(v.module == source_)) throw StructureError("apply: element not in the source module");
        auto out = FreeModuleElement<K>::zero(target_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j)
                if (!entries_[i][j].is_zero() && !v.comps[j].is_zero())
                    out.comps[i] = out.comps[i] + entries_[i][j] * v.comps[j];
        return out;
    }

    /// Same entries with both modules shifted by d (still homogeneous).
    FormMatrix shifted(Twist d) const {
        std::vector<Twist> st, tt;
        for (const auto& s : source_.twists) st.push_back(twist_add(s, d));
        for (const auto& t : target_.twists) tt.push_back(twist_add(t, d));
        return FormMatrix(GradedFreeModule(source_.ring, std::move(st)),
                          GradedFreeModule(target_.ring, std::move(tt)), entries_);
    }

    /// Plain entry transpose as a map between the shifted duals.
    FormMatrix transpose(Twist shift = {-5, 0}) const {
        FormMatrix r = zero(dual_module(target_, shift), dual_module(source_, shift));
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r.entries_[j][i] = entries_[i][j];
        return r;
    }

    bool is_square() const { return rows() == cols(); }

    /// Symmetric canonical layout on projective 3-space: source twists are
    /// the target twists dualized through -5.
    bool has_symmetric_layout() const {
        if (!is_square()) return false;
        for (std::size_t j = 0; j < cols(); ++j)
            if (source_.twists[j] != twist_sub({-5, 0}, target_.twists[j])) return false;
        return true;
    }
    bool is_symmetric() const {
        if (!has_symmetric_layout())
            throw StructureError("symmetry requires the -5 dual layout");
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = i + 1; j < cols(); ++j)
                if (entries_[i][j] != entries_[j][i]) return false;
        return true;
    }

    /// Submatrix keeping the listed rows and columns (twist lists follow).
    FormMatrix submatrix(const std::vector<std::size_t>& keep_rows,
                         const std::vector<std::size_t>& keep_cols) const {
        std::vector<Twist> st, tt;
        for (std::size_t j : keep_cols) st.push_back(source_.twists.at(j));
        for (std::size_t i : keep_rows) tt.push_back(target_.twists.at(i));
        std::vector<std::vector<Poly<K>>> e;
        for (std::size_t i : keep_rows) {
            std::vector<Poly<K>> row;
            for (std::size_t j : keep_cols) row.push_back(entries_[i][j]);
            e.push_back(std::move(row));
        }
        return FormMatrix(GradedFreeModule(source_.ring, std::move(st)),
                          GradedFreeModule(target_.ring, std::move(tt)), std::move(e));
    }

    /// First row deleted: the map to the truncated target.
    FormMatrix delete_first_row() const {
        if (rows() < 2) throw StructureError("cannot delete the only row");
        std::vector<std::size_t> keep_rows, keep_cols;
        for (std::size_t i = 1; i < rows(); ++i) keep_rows.push_back(i);
        for (std::size_t j = 0; j < cols(); ++j) keep_cols.push_back(j);
        return submatrix(keep_rows, keep_cols);
    }
    FormMatrix drop_first_row_and_column() const {
        if (rows() < 2 || cols() < 2) throw StructureError("cannot drop the only row/column");
        std::vector<std::size_t> keep_rows, keep_cols;
        for (std::size_t i = 1; i < rows(); ++i) keep_rows.push_back(i);
        for (std::size_t j = 1; j < cols(); ++j) keep_cols.push_back(j);
        return submatrix(keep_rows, keep_cols);
    }

private:
    static std::string degree_string(Twist d) {
        return d[1] == 0 ? std::to_string(d[0])
                         : "(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + ")";
    }
    void check_shape(const FormMatrix& o) const {
        if (!(source_ == o.source_ && target_ == o.target_))
            throw StructureError("matrix shapes differ");
    }

    GradedFreeModule source_, target_;
    std::vector<std::vector<Poly<K>>> entries_;
};

namespace det_detail {

/// Bareiss fraction-free elimination; every division is exact.
template <class K>
Poly<K> bareiss(std::vector<std::vector<Poly<K>>> m, const RingPtr& ring, const Budget& budget) {
    const std::size_t n = m.size();
    if (n == 0) return Poly<K>::from_int(ring, 1);
    int sign = 1;
    Poly<K> prev = Poly<K>::from_int(ring, 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return Poly<K>::zero(ring); // zero column below: singular
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly<K> num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num.is_zero() ? num : num.divide_exact(prev);
                if (m[i][j].degree() > budget.max_degree)
                    throw ResourceError("determinant exceeded degree budget");
            }
        prev = m[k][k];
    }
    Poly<K> det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

template <class K>
Poly<K> cofactor_expand(const std::vector<std::vector<Poly<K>>>& m, std::vector<std::size_t> cols,
                        std::size_t row, const RingPtr& ring) {
    if (cols.empty()) return Poly<K>::from_int(ring, 1);
    Poly<K> acc = Poly<K>::zero(ring);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const Poly<K>& e = m[row][cols[k]];
        if (e.is_zero()) continue;
        std::vector<std::size_t> rest;
        for (std::size_t k2 = 0; k2 < cols.size(); ++k2)
            if (k2 != k) rest.push_back(cols[k2]);
        Poly<K> minor = cofactor_expand(m, std::move(rest), row + 1, ring);
        Poly<K> piece = e * minor;
        acc = (k % 2 == 0) ? acc + piece : acc - piece;
    }
    return acc;
}

} // namespace det_detail

template <class K>
Poly<K> determinant(const FormMatrix<K>& m, const Budget& budget = Budget::defaults()) {
    if (!m.is_square()) throw StructureError("determinant of a non-square matrix");
    std::vector<std::vector<Poly<K>>> grid;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<Poly<K>> row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.entry(i, j));
        grid.push_back(std::move(row));
    }
    return det_detail::bareiss(std::move(grid), m.ring(), budget);
}

/// First-row cofactor expansion; cross-check partner for Bareiss, size <= 4.
template <class K>
Poly<K> determinant_cofactor(const FormMatrix<K>& m) {
    if (!m.is_square()) throw StructureError("determinant of a non-square matrix");
    if (m.rows() > 4) throw ResourceError("cofactor expansion limited to size 4");
    std::vector<std::vector<Poly<K>>> grid;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<Poly<K>> row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.entry(i, j));
        grid.push_back(std::move(row));
    }
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(j);
    return det_detail::cofactor_expand(grid, std::move(cols), 0, m.ring());
}

/// Fitting-style ideal of r x r minors; I_0 = (1), I_r = (0) past the size.
template <class K>
Ideal<K> minors_ideal(const FormMatrix<K>& m, int r, const Budget& budget = Budget::defaults()) {
    const RingPtr& ring = m.ring();
    if (r < 0) throw InputError("minor size must be nonnegative");
    if (r == 0) return Ideal<K>::unit(ring);
    if (static_cast<std::size_t>(r) > std::min(m.rows(), m.cols())) return Ideal<K>::zero(ring);

    auto combos = [](std::size_t n, int k) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur(static_cast<std::size_t>(k));
        auto rec = [&](auto&& self, std::size_t start, int depth) -> void {
            if (depth == k) { out.push_back(cur); return; }
            for (std::size_t v = start; v + static_cast<std::size_t>(k - depth) <= n; ++v) {
                cur[static_cast<std::size_t>(depth)] = v;
                self(self, v + 1, depth + 1);
            }
        };
        rec(rec, 0, 0);
        return out;
    };
    auto row_sets = combos(m.rows(), r);
    auto col_sets = combos(m.cols(), r);
    std::uint64_t count = static_cast<std::uint64_t>(row_sets.size()) * col_sets.size();
    if (count > budget.max_minors)
        throw ResourceError("minor enumeration exceeded budget (" + std::to_string(count) + " minors)");

    std::vector<Poly<K>> gens;
    for (const auto& rs : row_sets)
        for (const auto& cs : col_sets) {
            // early-zero pruning: a zero row or column kills the minor
            bool zero_line = false;
            for (std::size_t i : rs) {
                bool all = true;
                for (std::size_t j : cs)
                    if (!m.entry(i, j).is_zero()) { all = false; break; }
                if (all) { zero_line = true; break; }
            }
            if (!zero_line)
                for (std::size_t j : cs) {
                    bool all = true;
                    for (std::size_t i : rs)
                        if (!m.entry(i, j).is_zero()) { all = false; break; }
                    if (all) { zero_line = true; break; }
                }
            if (zero_line) continue;
            Poly<K> d = determinant(m.submatrix(rs, cs), budget);
            if (!d.is_zero()) gens.push_back(std::move(d));
        }
    return Ideal<K>(ring, std::move(gens));
}

/// Adjugate: beta with m . beta = beta . m = det(m) Id, as a map from the
/// target back to the source shifted by deg det.
template <class K>
FormMatrix<K> cofactor_adjoint(const FormMatrix<K>& m, const Budget& budget = Budget::defaults()) {
    if (!m.is_square()) throw StructureError("adjugate of a non-square matrix");
    const std::size_t n = m.rows();
    Twist ddeg{0, 0};
    for (std::size_t i = 0; i < n; ++i)
        ddeg = twist_add(ddeg, m.entry_degree(i, i));
    // beta: target -> source(ddeg)
    std::vector<Twist> shifted;
    for (const auto& s : m.source().twists) shifted.push_back(twist_add(s, ddeg));
    GradedFreeModule beta_target(m.ring(), shifted);
    FormMatrix<K> beta = FormMatrix<K>::zero(m.target(), beta_target);
    if (n == 1) {
        beta.entry_mut(0, 0) = Poly<K>::from_int(m.ring(), 1);
        return beta;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> rs, cs;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) rs.push_back(k); // delete row j
                if (k != i) cs.push_back(k); // delete column i
            }
            Poly<K> minor = determinant(m.submatrix(rs, cs), budget);
            beta.entry_mut(i, j) = ((i + j) % 2 == 0) ? minor : -minor;
        }
    return beta;
}

/// Same target, source summands of a then b; entry grids side by side.
template <class K>
FormMatrix<K> concat_sources(const FormMatrix<K>& a, const FormMatrix<K>& b) {
    if (!(a.target() == b.target())) throw StructureError("concatenation needs a shared target");
    std::vector<Twist> st = a.source().twists;
    st.insert(st.end(), b.source().twists.begin(), b.source().twists.end());
    FormMatrix<K> r = FormMatrix<K>::zero(GradedFreeModule(a.ring(), std::move(st)), a.target());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r.entry_mut(i, j) = a.entry(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r.entry_mut(i, a.cols() + j) = b.entry(i, j);
    }
    return r;
}

/// Dimension of the degree-d piece of the free module (rank-1 grading).
inline long long module_piece_dim(const GradedFreeModule& m, long d) {
    long long s = 0;
    for (const auto& t : m.twists) s += forms_dim(m.ring->nvars(), d + t[0]);
    return s;
}

/// The degree-d piece of the map as a scalar matrix. Rows run over
/// (target summand, monomial of degree d + twist), columns likewise for the
/// source; rank-1 gradings only.
template <class K>
DenseMatrix<K> degree_piece(const FormMatrix<K>& m, long d) {
    const RingPtr& ring = m.ring();
    if (ring->grading().rank != 1)
        throw StructureError("degree pieces require the standard grading");
    struct Slot { std::size_t offset; std::vector<Monomial> monos; };
    auto layout = [&](const GradedFreeModule& f) {
        std::vector<Slot> slots;
        std::size_t off = 0;
        for (const auto& t : f.twists) {
            long e = d + t[0];
            Slot s{off, e >= 0 ? monomials_of_degree(*ring, e) : std::vector<Monomial>{}};
            off += s.monos.size();
            slots.push_back(std::move(s));
        }
        return std::pair{slots, off};
    };
    auto [trows, nrows] = layout(m.target());
    auto [tcols, ncols] = layout(m.source());
    std::vector<std::unordered_map<Monomial, std::size_t, MonomialHash>> row_index(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < trows[i].monos.size(); ++k)
            row_index[i][trows[i].monos[k]] = trows[i].offset + k;

    DenseMatrix<K> out(nrows, ncols, ring->field());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t cm = 0; cm < tcols[j].monos.size(); ++cm) {
            std::size_t col = tcols[j].offset + cm;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                const Poly<K>& e = m.entry(i, j);
                if (e.is_zero()) continue;
                auto prod = e.times_term(FieldOps<K>::one(ring->field()), tcols[j].monos[cm]);
                for (const auto& t : prod.terms()) out.at(row_index[i].at(t.m), col) = t.c;
            }
        }
    return out;
}

/// dim of coker(m) in degree d: target piece minus the column-space rank.
template <class K>
long long presentation_coker_dim(const FormMatrix<K>& m, long d) {
    return module_piece_dim(m.target(), d) -
           static_cast<long long>(rank(degree_piece(m, d)));
}

/// dim of ker(m) in degree d: source piece minus the rank.
template <class K>
long long matrix_kernel_dim(const FormMatrix<K>& m, long d) {
    return module_piece_dim(m.source(), d) -
           static_cast<long long>(rank(degree_piece(m, d)));
}

/// Seeded graded automorphism of a free module: nonzero scalars on the
/// diagonal, random forms where the twist gap is positive, scalars above the
/// diagonal within equal twists. Determinant is a nonzero constant.
template <class K>
FormMatrix<K> graded_automorphism_random(const GradedFreeModule& m, Rng& rng) {
    FormMatrix<K> a = FormMatrix<K>::zero(m, m);
    const RingPtr& ring = m.ring;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (std::size_t j = 0; j < m.rank(); ++j) {
            Twist gap = twist_sub(m.twists[i], m.twists[j]);
            if (i == j) {
                a.entry_mut(i, j) =
                    Poly<K>::constant(ring, FieldOps<K>::random(rng, ring->field(), true));
            } else if (gap[0] == 0 && gap[1] == 0) {
                if (i < j)
                    a.entry_mut(i, j) =
                        Poly<K>::constant(ring, FieldOps<K>::random(rng, ring->field(), false));
            } else if (gap[0] >= 0 && gap[1] >= 0) {
                auto monos = monomials_of_degree(*ring, gap);
                if (!monos.empty())
                    a.entry_mut(i, j) = random_homogeneous<K>(ring, gap, rng, false);
            }
        }
    return a;
}

} // namespace canproj
