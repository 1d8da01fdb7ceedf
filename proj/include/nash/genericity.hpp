#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nash/errors.hpp"
#include "nash/jet.hpp"
#include "nash/linalg.hpp"
#include "nash/multipoly.hpp"
#include "nash/rng.hpp"
#include "nash/variety.hpp"
#include "nash/weierstrass.hpp"

namespace nash {

/// Applies a linear change of coordinates to a jet, variable i becoming the
/// linear form in row i of M.
inline Jet jet_substitute_linear(const Jet& u, const QMatrix& M) {
    if (M.rows() != u.nvars() || M.cols() != u.nvars())
        throw PreconditionError("jet substitution: matrix shape mismatch");
    std::vector<Jet> images;
    images.reserve(static_cast<size_t>(u.nvars()));
    for (int i = 0; i < u.nvars(); ++i) {
        MultiPoly row(u.nvars());
        for (int j = 0; j < M.cols(); ++j) {
            if (M.at(i, j) == 0) continue;
            Exps e(static_cast<size_t>(u.nvars()), 0);
            e[static_cast<size_t>(j)] = 1;
            row.add_term(std::move(e), GaussRat(M.at(i, j)));
        }
        images.push_back(Jet::from_poly(row, u.order(), u.prec(), u.hard_zero()));
    }
    return u.compose(images);
}

/// One invertible linear change of coordinates together with its exact
/// inverse, so every change can be undone and reported.
struct ChangeRecord {
    QMatrix matrix;
    QMatrix inverse;
    std::string scope;
    std::uint64_t seed_used = 0;
    int attempts = 0;

    static ChangeRecord of(QMatrix m, std::string scope, std::uint64_t seed, int attempts) {
        QMatrix inv = m.inverse();
        return ChangeRecord{std::move(m), std::move(inv), std::move(scope), seed, attempts};
    }

    bool is_identity() const {
        return matrix.rows() == matrix.cols() && matrix == QMatrix::identity(matrix.rows());
    }

    MultiPoly apply(const MultiPoly& p) const { return p.substitute_linear(matrix); }
    MultiPoly undo(const MultiPoly& p) const { return p.substitute_linear(inverse); }
    Jet apply(const Jet& u) const { return jet_substitute_linear(u, matrix); }
    Jet undo(const Jet& u) const { return jet_substitute_linear(u, inverse); }
};

namespace detail {

inline long candidate_bound(int attempt, int max_tries) {
    return 2 * attempt > max_tries ? 9 : 3;
}

/// Random integer matrix with nonzero determinant; entries in [-bound, bound].
inline QMatrix random_invertible(Rng& rng, int n, long bound) {
    for (int guard = 0; guard < 256; ++guard) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = rng.int_in(-bound, bound);
        if (m.det() != 0) return m;
    }
    throw InternalError("random_invertible: could not sample an invertible matrix");
}

/// Unipotent change x_i -> x_i + c_i * x_{n-1} for i < n-1.
inline QMatrix shear_toward_last(int n, const std::vector<long>& c) {
    QMatrix m = QMatrix::identity(n);
    for (int i = 0; i + 1 < n; ++i) m.at(i, n - 1) = c[static_cast<size_t>(i)];
    return m;
}

}  // namespace detail

/// A variety moved into Noether position with respect to its first
/// declared_dim coordinates.
struct ProperPosition {
    ChangeRecord change;
    VarietySpec variety;
};

/// Searches for a linear change of the ambient coordinates after which the
/// projection onto the first declared_dim coordinates is certified proper.
/// The identity is tried first so varieties already in position are kept.
/// Candidates leave the first fixed_prefix coordinates untouched, which
/// graph varieties need to stay graphs over their source block.
inline ProperPosition find_proper_position(const VarietySpec& V, std::uint64_t seed,
                                           int max_tries = 32, int fixed_prefix = 0) {
    V.validate();
    int m = V.declared_dim;
    int total = V.nvars();
    if (fixed_prefix < 0 || fixed_prefix > total)
        throw PreconditionError("find_proper_position: fixed prefix out of range");
    std::vector<std::string> names = V.all_names();

    VarietySpec split;
    split.base_vars.assign(names.begin(), names.begin() + m);
    split.fiber_vars.assign(names.begin() + m, names.end());
    split.declared_dim = m;

    Rng rng(seed);
    std::string failures;
    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        if (attempt > 1 && total - fixed_prefix < 1)
            throw ExhaustionError(
                "find_proper_position: identity not proper and every coordinate is pinned");
        QMatrix M = QMatrix::identity(total);
        if (attempt > 1) {
            QMatrix block = detail::random_invertible(
                rng, total - fixed_prefix, detail::candidate_bound(attempt, max_tries));
            for (int i = fixed_prefix; i < total; ++i)
                for (int j = fixed_prefix; j < total; ++j)
                    M.at(i, j) = block.at(i - fixed_prefix, j - fixed_prefix);
        }
        VarietySpec W = split;
        W.generators.clear();
        for (const MultiPoly& g : V.generators) W.generators.push_back(g.substitute_linear(M));
        PropernessResult pr = properness_check(W);
        if (pr.certified)
            return ProperPosition{ChangeRecord::of(std::move(M), "ambient", seed, attempt),
                                  std::move(W)};
        if (!failures.empty()) failures += ", ";
        failures += W.fiber_vars[static_cast<size_t>(pr.failing_fiber)];
    }
    throw ExhaustionError("find_proper_position: no change of coordinates certified properness "
                          "after " +
                          std::to_string(max_tries) + " tries; failing fiber variables: " +
                          failures);
}

/// Picks a rational linear form L on the fiber variables whose image
/// polynomial has degree equal to the generic fiber count, so projection
/// along L loses no sheet. Coordinate forms are tried before random
/// combinations.
inline std::vector<GaussRat> choose_linear_form(const VarietySpec& V, std::uint64_t seed,
                                                int max_tries = 32) {
    V.validate();
    int s = V.fiber_count();
    if (s == 0) throw InputError("choose_linear_form: variety has no fiber variables");
    if (!properness_check(V).certified)
        throw PreconditionError("choose_linear_form: projection to the base is not proper");

    int count = generic_fiber_count(V, seed);
    int confirm = generic_fiber_count(V, seed ^ 0x9e3779b97f4a7c15ULL);
    if (confirm != count)
        throw InternalError("choose_linear_form: generic fiber count is not seed-stable");

    Rng rng(seed);
    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        std::vector<GaussRat> L(static_cast<size_t>(s), GaussRat(0));
        if (attempt <= s) {
            L[static_cast<size_t>(attempt - 1)] = GaussRat(1);
        } else {
            long bound = detail::candidate_bound(attempt, max_tries);
            bool all_zero = true;
            for (int j = 0; j < s; ++j) {
                long c = rng.int_in(-bound, bound);
                L[static_cast<size_t>(j)] = GaussRat(c);
                if (c != 0) all_zero = false;
            }
            if (all_zero) continue;
        }
        try {
            UniOverPoly P = optimal_polynomial(V, L);
            if (P.degree() == count) return L;
        } catch (const PipelineError&) {
        }
    }
    throw ExhaustionError("choose_linear_form: no linear form reached fiber count " +
                          std::to_string(count) + " after " + std::to_string(max_tries) +
                          " tries");
}

/// A jet moved into position regular in the last variable, with the order of
/// vanishing along that axis.
struct RegularDirection {
    ChangeRecord change;
    Jet jet;
    int d = 0;
};

/// Searches linear changes of the source coordinates until the jet becomes
/// regular in the last variable, keeping the candidate with the smallest
/// axis order. The minimal total degree of the jet is a lower bound for
/// that order, so the search stops early once it is attained.
inline RegularDirection find_regular_direction(const Jet& u, std::uint64_t seed,
                                               int max_tries = 32) {
    if (u.stored_zero() || u.valid() < 0)
        throw PreconditionError("find_regular_direction: jet is zero");
    int n = u.nvars();
    int last = n - 1;

    int delta = -1;
    for (const auto& [e, c] : u.terms()) {
        int deg = 0;
        for (int ei : e) deg += ei;
        if (delta < 0 || deg < delta) delta = deg;
    }

    static const long kShearSteps[] = {1, -1, 2, -2, 3, -3};
    Rng rng(seed);
    std::optional<RegularDirection> best;
    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        QMatrix M(0, 0);
        if (attempt == 1) {
            M = QMatrix::identity(n);
        } else if (attempt <= 7) {
            std::vector<long> c(static_cast<size_t>(n > 0 ? n - 1 : 0), kShearSteps[attempt - 2]);
            M = detail::shear_toward_last(n, c);
        } else {
            long bound = detail::candidate_bound(attempt, max_tries);
            std::vector<long> c(static_cast<size_t>(n > 0 ? n - 1 : 0), 0);
            for (long& ci : c) ci = rng.int_in(-bound, bound);
            M = detail::shear_toward_last(n, c);
        }
        Jet w = attempt == 1 ? u : jet_substitute_linear(u, M);
        std::optional<int> d = xn_regular_order_opt(w, last);
        if (d && (!best || *d < best->d))
            best = RegularDirection{ChangeRecord::of(std::move(M), "source", seed, attempt),
                                    std::move(w), *d};
        if (best && best->d == delta) break;
    }
    if (!best)
        throw ExhaustionError("find_regular_direction: no direction was regular after " +
                              std::to_string(max_tries) + " tries");
    return std::move(*best);
}

}  // namespace nash
