#include "hbl/tensor_rank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "hbl/smith.hpp"

namespace hbl::hmx {

namespace {

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct Searcher {
    std::vector<int> dims;
    int d;
    long long bound;
    long long budget;
    bool aborted = false;

    std::vector<long long> residual;
    std::vector<size_t> stride;

    bool tick() {
        if (budget <= 0) {
            aborted = true;
            return false;
        }
        --budget;
        return true;
    }

    std::vector<int> unflatten(size_t off) const {
        std::vector<int> idx(d);
        for (int i = d - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(off % dims[i]) + 1;
            off /= dims[i];
        }
        return idx;
    }

    // Does an integer rank-1 term with entries of every vector in
    // [-bound, bound] equal the residual exactly?
    bool residual_is_rank1() {
        if (!tick()) return false;
        size_t p = 0;
        while (p < residual.size() && residual[p] == 0) ++p;
        if (p == residual.size()) return false;  // zero handled by caller
        const long long a = residual[p];
        auto pidx = unflatten(p);

        // fibers through p
        std::vector<std::vector<long long>> fiber(d);
        for (int i = 0; i < d; ++i) {
            fiber[i].resize(dims[i]);
            auto idx = pidx;
            for (int k = 1; k <= dims[i]; ++k) {
                idx[i] = k;
                size_t off = 0;
                for (int j = 0; j < d; ++j) off = off * dims[j] + (idx[j] - 1);
                fiber[i][k - 1] = residual[off];
            }
        }
        // rank-1 over the rationals: entry * a^(d-1) == product of fibers
        __int128 apow = 1;
        for (int i = 0; i + 1 < d; ++i) apow *= a;
        {
            std::vector<int> idx(d, 1);
            for (size_t off = 0; off < residual.size(); ++off) {
                __int128 prod = 1;
                for (int i = 0; i < d; ++i) prod *= fiber[i][idx[i] - 1];
                if (static_cast<__int128>(residual[off]) * apow != prod) return false;
                for (int i = d - 1; i >= 0; --i) {
                    if (idx[i] < dims[i]) {
                        ++idx[i];
                        break;
                    }
                    idx[i] = 1;
                }
            }
        }
        // primitive direction vectors; all scaling freedom gathered in s
        std::vector<std::vector<long long>> w(d);
        long long prod_wp = 1;
        for (int i = 0; i < d; ++i) {
            long long g = 0;
            for (long long v : fiber[i]) g = std::gcd(g, v);
            if (fiber[i][pidx[i] - 1] < 0) g = -g;
            w[i].resize(dims[i]);
            for (int k = 0; k < dims[i]; ++k) w[i][k] = fiber[i][k] / g;
            prod_wp *= w[i][pidx[i] - 1];
        }
        if (a % prod_wp != 0) return false;
        const long long s = a / prod_wp;

        std::vector<long long> wmax(d, 0);
        for (int i = 0; i < d; ++i)
            for (long long v : w[i]) wmax[i] = std::max(wmax[i], v < 0 ? -v : v);

        // split |s| into d positive factors lambda_i with lambda_i * wmax_i
        // <= bound (the sign rides on the first factor)
        const long long s_abs = s < 0 ? -s : s;
        std::vector<long long> lam(d);
        auto feasible = [&](auto&& self, int i, long long rest) -> bool {
            if (i == d - 1) return rest * wmax[i] <= bound;
            for (long long f = 1; f <= rest; ++f) {
                if (rest % f != 0 || f * wmax[i] > bound) continue;
                if (self(self, i + 1, rest / f)) return true;
            }
            return false;
        };
        return feasible(feasible, 0, s_abs);
    }

    // vectors over [-bound,bound]^m with v[fix-1] != 0 (positive_only: > 0),
    // lexicographic order
    std::vector<std::vector<long long>> axis_vectors(int m, int fix, bool positive_only) const {
        std::vector<std::vector<long long>> out;
        std::vector<long long> v(m, -bound);
        for (;;) {
            if (v[fix - 1] != 0 && (!positive_only || v[fix - 1] > 0)) out.push_back(v);
            int i = m - 1;
            while (i >= 0 && v[i] == bound) v[i--] = -bound;
            if (i < 0) break;
            ++v[i];
        }
        return out;
    }

    bool dfs(int q) {
        if (std::all_of(residual.begin(), residual.end(), [](long long e) { return e == 0; }))
            return true;
        if (q == 0) return false;
        if (!tick()) return false;
        const long long reach = static_cast<long long>(q) * ipow(bound, d);
        for (long long e : residual)
            if (e > reach || e < -reach) return false;
        if (q == 1) return residual_is_rank1();

        size_t p = 0;
        while (residual[p] == 0) ++p;
        auto pidx = unflatten(p);

        std::vector<std::vector<std::vector<long long>>> cands(d);
        for (int i = 0; i < d; ++i) cands[i] = axis_vectors(dims[i], pidx[i], i > 0);

        // partial outer products, built axis by axis
        std::vector<std::vector<long long>> part(d);
        std::vector<size_t> pick(d, 0);
        int axis = 0;
        while (axis >= 0) {
            if (aborted) return false;
            if (pick[axis] == cands[axis].size()) {
                pick[axis] = 0;
                --axis;
                if (axis >= 0) ++pick[axis];
                continue;
            }
            const auto& v = cands[axis][pick[axis]];
            if (axis == 0) {
                part[0].assign(v.begin(), v.end());
            } else {
                const auto& prev = part[axis - 1];
                auto& cur = part[axis];
                cur.resize(prev.size() * v.size());
                size_t t = 0;
                for (long long pe : prev)
                    for (long long ve : v) cur[t++] = pe * ve;
            }
            if (axis + 1 < d) {
                ++axis;
                continue;
            }
            if (!tick()) return false;
            const auto& term = part[d - 1];
            for (size_t i = 0; i < residual.size(); ++i) residual[i] -= term[i];
            if (dfs(q - 1)) return true;
            for (size_t i = 0; i < residual.size(); ++i) residual[i] += term[i];
            ++pick[axis];
        }
        return false;
    }
};

}  // namespace

RankBounds tensor_rank_bounds(const Hypermatrix& h, long long entry_bound, long long budget) {
    if (h.modulus() != 0) throw std::invalid_argument("tensor_rank_bounds: requires modulus 0");
    if (entry_bound < h.max_abs_entry())
        throw std::invalid_argument("tensor_rank_bounds: entry bound below max |entry|");
    if (entry_bound < 1) entry_bound = 1;

    if (h.is_zero()) return RankBounds{0, 0, true};

    const auto mlr = multilinear_rank(h);
    const int lower = *std::max_element(mlr.begin(), mlr.end());
    const int nonzero =
        static_cast<int>(std::count_if(h.entries().begin(), h.entries().end(),
                                       [](long long e) { return e != 0; }));

    Searcher s;
    s.dims = h.dims();
    s.d = h.order();
    s.bound = entry_bound;
    s.budget = budget;
    s.stride.clear();

    for (int r = std::max(lower, 1); r <= nonzero; ++r) {
        s.residual = h.entries();
        if (s.dfs(r)) {
            const bool exact = (r == lower) || !s.aborted;
            return RankBounds{lower, r, exact};
        }
        if (s.aborted) break;
    }
    return RankBounds{lower, std::nullopt, false};
}

}  // namespace hbl::hmx
