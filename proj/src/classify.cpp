#include "hbl/classify.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hbl/smith.hpp"
#include "hbl/tensor_rank.hpp"

namespace hbl::classify {

using hb::InvariantDatum;
using hb::SequenceI;
using hmx::Hypermatrix;
using hmx::MoveKind;

namespace {

std::string seq_str(const SequenceI& I) {
    std::string s;
    for (int i : I) {
        if (!s.empty()) s += ',';
        s += std::to_string(i);
    }
    return s;
}

void cyclic_representatives(int n, std::vector<SequenceI>& out) {
    // all distinct-index sequences of length 2..n that are the lex-least
    // among their rotations
    std::vector<int> seq;
    std::vector<bool> used(n + 1, false);
    auto rec = [&](auto&& self, int target) -> void {
        if (static_cast<int>(seq.size()) == target) {
            SequenceI rot = seq;
            for (int r = 1; r < target; ++r) {
                std::rotate(rot.begin(), rot.begin() + 1, rot.end());
                if (rot < seq) return;
            }
            out.push_back(seq);
            return;
        }
        for (int i = 1; i <= n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            seq.push_back(i);
            self(self, target);
            seq.pop_back();
            used[i] = false;
        }
    };
    for (int len = 2; len <= n; ++len) rec(rec, len);
}

}  // namespace

Profile profile(const hb::HandlebodyPresentation& pres) {
    Profile p;
    p.n = pres.component_count();
    p.genera = pres.genera();
    std::vector<SequenceI> reps;
    cyclic_representatives(p.n, reps);
    for (const SequenceI& I : reps) p.data.emplace(I, hb::hypermatrix_of(pres, I));
    return p;
}

bool is_trivial(const hb::HandlebodyPresentation& pres) {
    Profile p = profile(pres);
    return std::all_of(p.data.begin(), p.data.end(),
                       [](const auto& kv) { return kv.second.matrix.is_zero(); });
}

bool is_almost_trivial(const hb::HandlebodyPresentation& pres) {
    Profile p = profile(pres);
    return std::all_of(p.data.begin(), p.data.end(), [&](const auto& kv) {
        return static_cast<int>(kv.first.size()) >= p.n || kv.second.matrix.is_zero();
    });
}

std::optional<int> lambda_invariant(const hb::HandlebodyPresentation& pres, int comp) {
    if (comp < 1 || comp > pres.component_count())
        throw std::invalid_argument("lambda_invariant: component out of range");
    Profile p = profile(pres);
    for (const auto& [I, datum] : p.data) {  // ordered by length, then lex
        if (std::find(I.begin(), I.end(), comp) == I.end()) continue;
        if (!datum.matrix.is_zero()) return static_cast<int>(I.size());
    }
    return std::nullopt;
}

namespace {

long long entry_gcd(const Hypermatrix& m) {
    long long g = m.modulus();
    for (long long e : m.entries()) g = std::gcd(g, e);
    return g;
}

template <typename T>
std::string render(const T& v) {
    std::ostringstream os;
    if constexpr (std::is_arithmetic_v<T>) {
        os << v;
    } else {
        os << '[';
        bool first = true;
        for (const auto& x : v) {
            if (!first) os << ' ';
            first = false;
            os << render(x);
        }
        os << ']';
    }
    return os.str();
}

constexpr long long kDistinguishRankBudget = 20'000;

}  // namespace

std::optional<Separation> distinguish(const Profile& a, const Profile& b) {
    if (a.n != b.n || a.genera != b.genera)
        return Separation{"shape", render(a.genera) + " vs " + render(b.genera)};
    for (const auto& [I, da] : a.data) {
        const auto it = b.data.find(I);
        if (it == b.data.end()) continue;
        const InvariantDatum& db = it->second;
        const std::string at = "(I=" + seq_str(I) + ")";
        if (da.delta != db.delta)
            return Separation{"delta", "delta" + at + ": " + render(da.delta) + " vs " + render(db.delta)};
        if (da.matrix.modulus() == 0) {
            auto ea = hmx::elementary_divisors(da.matrix);
            auto eb = hmx::elementary_divisors(db.matrix);
            if (ea != eb) return Separation{"ed", "ed" + at + ": " + render(ea) + " vs " + render(eb)};
            auto ra = hmx::multilinear_rank(da.matrix);
            auto rb = hmx::multilinear_rank(db.matrix);
            if (ra != rb)
                return Separation{"mlrank", "mlrank" + at + ": " + render(ra) + " vs " + render(rb)};
            const long long bound =
                std::max<long long>({2, da.matrix.max_abs_entry(), db.matrix.max_abs_entry()});
            auto ta = hmx::tensor_rank_bounds(da.matrix, bound, kDistinguishRankBudget);
            auto tb = hmx::tensor_rank_bounds(db.matrix, bound, kDistinguishRankBudget);
            if (ta.exact && tb.exact && ta.upper != tb.upper)
                return Separation{"rank_t", "rank_t" + at + ": " + render(*ta.upper) + " vs " +
                                                render(*tb.upper)};
            if (da.matrix.is_cubical() && da.matrix.order() % 2 == 0) {
                long long ha = hmx::hyperdeterminant(da.matrix);
                long long hb_ = hmx::hyperdeterminant(db.matrix);
                if (std::abs(ha) != std::abs(hb_))
                    return Separation{"hyperdet-abs", "|hyperdet|" + at + ": " + render(std::abs(ha)) +
                                                          " vs " + render(std::abs(hb_))};
            }
        }
        if (entry_gcd(da.matrix) != entry_gcd(db.matrix))
            return Separation{"entry-gcd", "gcd" + at + ": " + render(entry_gcd(da.matrix)) + " vs " +
                                               render(entry_gcd(db.matrix))};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// equivalence search

namespace {

// Static description of a tuple: which axis of which datum every component
// acts on, and each component's size.
struct TupleShape {
    int max_component = 0;
    std::vector<int> comp_size;                          // 1-based, 0 = absent
    std::vector<std::vector<int>> axis_of;               // [datum][axis] = component
    std::vector<long long> moduli;                       // per datum
    std::vector<std::vector<int>> dims;                  // per datum

    static TupleShape of(const std::vector<InvariantDatum>& data) {
        TupleShape s;
        for (const InvariantDatum& d : data)
            for (int c : d.I) s.max_component = std::max(s.max_component, c);
        s.comp_size.assign(s.max_component + 1, 0);
        for (const InvariantDatum& d : data) {
            if (d.I.size() != d.matrix.dims().size())
                throw std::invalid_argument("search: datum sequence/dims arity mismatch");
            s.axis_of.push_back(std::vector<int>(d.I.begin(), d.I.end()));
            s.moduli.push_back(d.matrix.modulus());
            s.dims.push_back(d.matrix.dims());
            for (size_t ax = 0; ax < d.I.size(); ++ax) {
                int c = d.I[ax];
                int g = d.matrix.dims()[ax];
                if (s.comp_size[c] == 0)
                    s.comp_size[c] = g;
                else if (s.comp_size[c] != g)
                    throw std::invalid_argument("search: inconsistent component size");
            }
        }
        return s;
    }

    bool compatible_with(const TupleShape& o) const {
        return comp_size == o.comp_size && axis_of == o.axis_of && moduli == o.moduli &&
               dims == o.dims;
    }
};

using Flat = std::vector<long long>;  // all datum entries concatenated

Flat flatten_tuple(const std::vector<InvariantDatum>& data) {
    Flat f;
    for (const auto& d : data) f.insert(f.end(), d.matrix.entries().begin(), d.matrix.entries().end());
    return f;
}

std::vector<InvariantDatum> rebuild_tuple(const std::vector<InvariantDatum>& like, const Flat& f) {
    std::vector<InvariantDatum> out;
    size_t off = 0;
    for (const auto& d : like) {
        size_t len = d.matrix.entries().size();
        out.push_back(InvariantDatum{
            d.I, d.delta,
            Hypermatrix(d.matrix.dims(), Flat(f.begin() + off, f.begin() + off + len),
                        d.matrix.modulus())});
        off += len;
    }
    return out;
}

hmx::Move to_axis_move(const DiagonalMove& mv, int axis) {
    return hmx::Move{mv.kind, axis, mv.l, mv.h, mv.c};
}

// Applies a diagonal move in place on a flat tuple.
void apply_flat(const TupleShape& shape, Flat& flat, const DiagonalMove& mv) {
    size_t off = 0;
    for (size_t t = 0; t < shape.dims.size(); ++t) {
        const auto& dims = shape.dims[t];
        size_t len = 1;
        for (int m : dims) len *= static_cast<size_t>(m);
        for (size_t ax = 0; ax < dims.size(); ++ax) {
            if (shape.axis_of[t][ax] != mv.component) continue;
            size_t inner = 1;
            for (size_t i = ax + 1; i < dims.size(); ++i) inner *= static_cast<size_t>(dims[i]);
            size_t outer = 1;
            for (size_t i = 0; i < ax; ++i) outer *= static_cast<size_t>(dims[i]);
            const size_t g = static_cast<size_t>(dims[ax]);
            const long long delta = shape.moduli[t];
            auto base = [&](size_t o, int k) { return off + (o * g + (k - 1)) * inner; };
            auto red = [&](long long v) {
                if (delta == 0) return v;
                v %= delta;
                return v < 0 ? v + delta : v;
            };
            for (size_t o = 0; o < outer; ++o) {
                switch (mv.kind) {
                    case MoveKind::Swap:
                        for (size_t i = 0; i < inner; ++i)
                            std::swap(flat[base(o, mv.l) + i], flat[base(o, mv.h) + i]);
                        break;
                    case MoveKind::Negate:
                        for (size_t i = 0; i < inner; ++i) {
                            long long& e = flat[base(o, mv.l) + i];
                            e = red(-e);
                        }
                        break;
                    case MoveKind::AddMultiple:
                        for (size_t i = 0; i < inner; ++i) {
                            long long& e = flat[base(o, mv.l) + i];
                            e = red(e + mv.c * flat[base(o, mv.h) + i]);
                        }
                        break;
                }
            }
        }
        off += len;
    }
}

// --- canonical form under axis permutations and slice negations -----------

struct CanonicalForm {
    Flat key;
    std::vector<DiagonalMove> transform;  // original -> canonical
};

struct Canonicalizer {
    const TupleShape& shape;
    std::vector<int> components;      // components with size > 0
    std::vector<int> var_base;        // GF(2) variable index per component
    int var_count = 0;
    // per flat position: the (component, slice) pairs indexing it, per datum
    std::vector<std::vector<std::pair<int, int>>> pos_axes;  // (component, 1-based slice)

    explicit Canonicalizer(const TupleShape& s) : shape(s) {
        var_base.assign(shape.comp_size.size(), -1);
        for (int c = 1; c < static_cast<int>(shape.comp_size.size()); ++c) {
            if (shape.comp_size[c] == 0) continue;
            components.push_back(c);
            var_base[c] = var_count;
            var_count += shape.comp_size[c];
        }
        if (var_count > 62) throw std::invalid_argument("search: too many slice variables");
        for (size_t t = 0; t < shape.dims.size(); ++t) {
            const auto& dims = shape.dims[t];
            std::vector<int> idx(dims.size(), 1);
            size_t len = 1;
            for (int m : dims) len *= static_cast<size_t>(m);
            for (size_t off = 0; off < len; ++off) {
                std::vector<std::pair<int, int>> axes;
                for (size_t ax = 0; ax < dims.size(); ++ax)
                    axes.emplace_back(shape.axis_of[t][ax], idx[ax]);
                pos_axes.push_back(std::move(axes));
                for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
                    if (idx[i] < dims[i]) {
                        ++idx[i];
                        break;
                    }
                    idx[i] = 1;
                }
            }
        }
    }

    long long perm_combos() const {
        long long total = 1;
        for (int c : components) {
            long long f = 1;
            for (int k = 2; k <= shape.comp_size[c]; ++k) f *= k;
            total *= f;
            if (total > 100'000) return total;
        }
        return total;
    }

    // canonical key for one permutation assignment; perms[c][new_k-1] = old_k
    // (1-based). Returns the key and the chosen sign assignment.
    std::pair<Flat, std::uint64_t> sign_minimize(const Flat& flat,
                                                 const std::vector<std::vector<int>>& perm) const {
        // greedy lexicographic minimization over slice negations: GF(2)
        // elimination over one variable per (component, slice)
        std::vector<std::uint64_t> row_mask;
        std::vector<int> row_rhs;
        std::vector<int> pivot_bit;
        Flat key(flat.size());

        // modulus per flat position
        size_t pos = 0;
        std::vector<long long> mod_of(flat.size());
        for (size_t t = 0; t < shape.dims.size(); ++t) {
            size_t len = 1;
            for (int m : shape.dims[t]) len *= static_cast<size_t>(m);
            for (size_t i = 0; i < len; ++i) mod_of[pos++] = shape.moduli[t];
        }

        for (size_t p = 0; p < flat.size(); ++p) {
            // source position under the permutation
            std::uint64_t mask = 0;
            size_t src = p;
            {
                // recompute source offset: permute each axis index
                // pos_axes stores (component, new-slice) for position p
                // source slice = perm[c][new_k-1]
                // rebuild the flat offset of the source
                size_t off = 0, base = 0;
                size_t t = 0, acc = 0;
                // find datum t containing p
                for (t = 0; t < shape.dims.size(); ++t) {
                    size_t len = 1;
                    for (int m : shape.dims[t]) len *= static_cast<size_t>(m);
                    if (p < acc + len) {
                        base = acc;
                        break;
                    }
                    acc += len;
                }
                const auto& dims = shape.dims[t];
                const auto& axes = pos_axes[p];
                for (size_t ax = 0; ax < dims.size(); ++ax) {
                    const int c = axes[ax].first;
                    const int new_k = axes[ax].second;
                    const int old_k = perm[c][new_k - 1];
                    off = off * static_cast<size_t>(dims[ax]) + static_cast<size_t>(old_k - 1);
                    mask |= 1ull << (var_base[c] + new_k - 1);
                }
                src = base + off;
            }
            const long long v = flat[src];
            const long long m = mod_of[p];
            const long long flipped = m == 0 ? -v : (v == 0 ? 0 : m - v);
            if (v == flipped) {
                key[p] = v;
                continue;
            }
            const int want = flipped < v ? 1 : 0;  // parity 1 = negate
            // reduce mask by existing rows
            std::uint64_t mk = mask;
            int rhs = want;
            for (size_t r = 0; r < row_mask.size(); ++r)
                if (mk & (1ull << pivot_bit[r])) {
                    mk ^= row_mask[r];
                    rhs ^= row_rhs[r];
                }
            if (mk == 0) {
                // parity forced to want ^ rhs ... rhs now holds want xor
                // accumulated parity; forced parity = want ^ rhs
                const int parity = want ^ rhs;
                key[p] = parity ? flipped : v;
            } else {
                // free: pick the new pivot, achieve the wanted parity
                int bit = std::countr_zero(mk);
                // reduce previous rows to keep RREF
                for (size_t r = 0; r < row_mask.size(); ++r)
                    if (row_mask[r] & (1ull << bit)) {
                        row_mask[r] ^= mk;
                        row_rhs[r] ^= rhs;
                    }
                row_mask.push_back(mk);
                row_rhs.push_back(rhs);
                pivot_bit.push_back(bit);
                key[p] = flipped < v ? flipped : v;
            }
        }

        // concrete sign assignment: free variables 0, pivots from rhs
        std::uint64_t signs = 0;
        for (size_t r = 0; r < row_mask.size(); ++r) {
            // bits other than the pivot are free (RREF) -> value = rhs
            if (row_rhs[r]) signs |= 1ull << pivot_bit[r];
        }
        // verify and fall back to a direct solve if RREF left cross terms
        for (size_t r = 0; r < row_mask.size(); ++r) {
            int acc = 0;
            std::uint64_t mk = row_mask[r];
            while (mk) {
                int b = std::countr_zero(mk);
                mk &= mk - 1;
                acc ^= (signs >> b) & 1;
            }
            if (acc != row_rhs[r]) throw std::logic_error("sign minimization is inconsistent");
        }
        return {std::move(key), signs};
    }

    CanonicalForm run(const Flat& flat) const {
        // identity permutation per component
        std::vector<std::vector<int>> perm(shape.comp_size.size());
        for (int c : components) {
            perm[c].resize(shape.comp_size[c]);
            std::iota(perm[c].begin(), perm[c].end(), 1);
        }

        const bool enumerate = perm_combos() <= 100'000;
        std::optional<Flat> best;
        std::vector<std::vector<int>> best_perm;
        std::uint64_t best_signs = 0;

        auto consider = [&](const std::vector<std::vector<int>>& pm) {
            auto [key, signs] = sign_minimize(flat, pm);
            if (!best || key < *best) {
                best = std::move(key);
                best_perm = pm;
                best_signs = signs;
            }
        };

        if (!enumerate) {
            consider(perm);
        } else {
            // odometer over per-component permutations
            auto rec = [&](auto&& self, size_t ci) -> void {
                if (ci == components.size()) {
                    consider(perm);
                    return;
                }
                int c = components[ci];
                std::sort(perm[c].begin(), perm[c].end());
                do {
                    self(self, ci + 1);
                } while (std::next_permutation(perm[c].begin(), perm[c].end()));
                std::sort(perm[c].begin(), perm[c].end());
            };
            rec(rec, 0);
        }

        CanonicalForm out;
        out.key = std::move(*best);
        // realize best_perm then signs as moves
        for (int c : components) {
            const auto& pm = best_perm[c];
            const int g = shape.comp_size[c];
            std::vector<int> arr(g);
            std::iota(arr.begin(), arr.end(), 1);  // arr[pos-1] = old slice currently there
            for (int k = 1; k <= g; ++k) {
                if (arr[k - 1] == pm[k - 1]) continue;
                int j = k + 1;
                while (j <= g && arr[j - 1] != pm[k - 1]) ++j;
                out.transform.push_back(DiagonalMove{c, MoveKind::Swap, k, j, 0});
                std::swap(arr[k - 1], arr[j - 1]);
            }
        }
        for (int c : components)
            for (int k = 1; k <= shape.comp_size[c]; ++k)
                if ((best_signs >> (var_base[c] + k - 1)) & 1)
                    out.transform.push_back(DiagonalMove{c, MoveKind::Negate, k, k, 0});
        return out;
    }
};

}  // namespace

std::vector<InvariantDatum> apply_diagonal_moves(std::vector<InvariantDatum> data,
                                                 const std::vector<DiagonalMove>& moves) {
    for (const DiagonalMove& mv : moves) {
        for (InvariantDatum& d : data) {
            for (size_t ax = 0; ax < d.I.size(); ++ax) {
                if (d.I[ax] != mv.component) continue;
                d.matrix = hmx::apply_move(d.matrix, to_axis_move(mv, static_cast<int>(ax) + 1));
            }
        }
    }
    return data;
}

namespace {

// SNF-based decision for a single matrix datum over Z: both sides reduce to
// the same diagonal iff they are related by row/column moves.
ClassificationResult matrix_fast_path(const std::vector<InvariantDatum>& a,
                                      const std::vector<InvariantDatum>& b) {
    auto reduce = [&](const InvariantDatum& d, std::vector<DiagonalMove>& moves) {
        hmx::Matrix m{d.matrix.dims()[0], d.matrix.dims()[1], d.matrix.entries()};
        std::vector<hmx::ElementaryOp> ops;
        hmx::Matrix snf = hmx::smith_reduce(m, &ops);
        for (const auto& op : ops)
            moves.push_back(DiagonalMove{op.on_rows ? d.I[0] : d.I[1], op.kind, op.l, op.h, op.c});
        return snf;
    };
    std::vector<DiagonalMove> ma, mb;
    hmx::Matrix sa = reduce(a.front(), ma);
    hmx::Matrix sb = reduce(b.front(), mb);
    ClassificationResult res;
    if (sa == sb) {
        res.verdict = Verdict::Equivalent;
        res.witness = std::move(ma);
        for (auto it = mb.rbegin(); it != mb.rend(); ++it) res.witness.push_back(it->inverse());
    } else {
        res.verdict = Verdict::Distinct;
        res.separation = Separation{"ed", "matrix normal forms differ"};
    }
    return res;
}

std::vector<DiagonalMove> inverted_reversed(const std::vector<DiagonalMove>& moves) {
    std::vector<DiagonalMove> out;
    out.reserve(moves.size());
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) out.push_back(it->inverse());
    return out;
}

struct Node {
    Flat state;
    int parent = -1;
    DiagonalMove mv;
};

std::vector<DiagonalMove> path_from_root(const std::vector<Node>& nodes, int id) {
    std::vector<DiagonalMove> path;
    while (nodes[id].parent >= 0) {
        path.push_back(nodes[id].mv);
        id = nodes[id].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

ClassificationResult search_equivalence(const std::vector<InvariantDatum>& a,
                                        const std::vector<InvariantDatum>& b,
                                        const SearchOptions& opts) {
    if (a.size() != b.size()) throw std::invalid_argument("search: tuple sizes differ");
    if (a.empty()) throw std::invalid_argument("search: empty tuple");
    const TupleShape shape = TupleShape::of(a);
    if (!shape.compatible_with(TupleShape::of(b)))
        throw std::invalid_argument("search: tuple shapes or moduli differ");
    for (size_t t = 0; t < a.size(); ++t)
        if (a[t].I != b[t].I) throw std::invalid_argument("search: tuple sequences differ");

    ClassificationResult res;
    Flat fa = flatten_tuple(a);
    Flat fb = flatten_tuple(b);
    if (fa == fb) {
        res.verdict = Verdict::Equivalent;
        return res;
    }

    if (a.size() == 1 && a.front().matrix.order() == 2 && a.front().matrix.modulus() == 0)
        return matrix_fast_path(a, b);

    const bool all_modular =
        std::all_of(shape.moduli.begin(), shape.moduli.end(), [](long long m) { return m > 0; });
    long long bound = opts.magnitude_bound;
    if (bound == 0) {
        long long mx = 1;
        for (long long e : fa) mx = std::max(mx, e < 0 ? -e : e);
        for (long long e : fb) mx = std::max(mx, e < 0 ? -e : e);
        bound = 4 * mx;
    }

    Canonicalizer canon(shape);

    // candidate diagonal moves
    std::vector<DiagonalMove> moves;
    for (int c = 1; c < static_cast<int>(shape.comp_size.size()); ++c) {
        const int g = shape.comp_size[c];
        if (g == 0) continue;
        for (int l = 1; l <= g; ++l) {
            moves.push_back(DiagonalMove{c, MoveKind::Negate, l, l, 0});
            for (int h = 1; h <= g; ++h) {
                if (h == l) continue;
                if (l < h) moves.push_back(DiagonalMove{c, MoveKind::Swap, l, h, 0});
                moves.push_back(DiagonalMove{c, MoveKind::AddMultiple, l, h, 1});
                moves.push_back(DiagonalMove{c, MoveKind::AddMultiple, l, h, -1});
            }
        }
    }

    struct Side {
        std::vector<Node> nodes;
        std::map<Flat, int> seen;  // canonical key -> node id
        std::vector<int> frontier;
        bool exhausted = false;
    };
    Side fwd, bwd;
    long long visited = 0;

    auto finish_equivalent = [&](int fid, int bid) {
        std::vector<DiagonalMove> witness = path_from_root(fwd.nodes, fid);
        CanonicalForm cf = canon.run(fwd.nodes[fid].state);
        CanonicalForm cb = canon.run(bwd.nodes[bid].state);
        for (const auto& mv : cf.transform) witness.push_back(mv);
        for (const auto& mv : inverted_reversed(cb.transform)) witness.push_back(mv);
        for (const auto& mv : inverted_reversed(path_from_root(bwd.nodes, bid)))
            witness.push_back(mv);
        // replay to confirm the witness is exact
        Flat check = fa;
        for (const auto& mv : witness) apply_flat(shape, check, mv);
        if (check != fb) throw std::logic_error("search: witness replay mismatch");
        res.verdict = Verdict::Equivalent;
        res.witness = std::move(witness);
        res.visited = visited;
    };

    auto seed = [&](Side& side, const Flat& f) {
        side.nodes.push_back(Node{f, -1, {}});
        side.seen.emplace(canon.run(f).key, 0);
        side.frontier.push_back(0);
        ++visited;
    };
    seed(fwd, fa);
    seed(bwd, fb);
    if (fwd.seen.begin()->first == bwd.seen.begin()->first) {
        finish_equivalent(0, 0);
        return res;
    }

    auto expand_side = [&](Side& self, Side& other, bool forward) -> std::optional<ClassificationResult> {
        std::vector<int> next;
        for (int id : self.frontier) {
            for (const DiagonalMove& mv : moves) {
                if (visited >= opts.budget) {
                    res.verdict = Verdict::Unknown;
                    res.note = "budget of " + std::to_string(opts.budget) + " states exhausted";
                    res.visited = visited;
                    return res;
                }
                Flat f = self.nodes[id].state;
                apply_flat(shape, f, mv);
                if (!all_modular) {
                    bool over = false;
                    for (long long e : f)
                        if (e > bound || e < -bound) {
                            over = true;
                            break;
                        }
                    if (over) continue;
                }
                CanonicalForm cf = canon.run(f);
                if (self.seen.contains(cf.key)) continue;
                self.nodes.push_back(Node{std::move(f), id, mv});
                const int nid = static_cast<int>(self.nodes.size()) - 1;
                auto hit = other.seen.find(cf.key);
                self.seen.emplace(std::move(cf.key), nid);
                next.push_back(nid);
                ++visited;
                if (hit != other.seen.end()) {
                    if (forward)
                        finish_equivalent(nid, hit->second);
                    else
                        finish_equivalent(hit->second, nid);
                    return res;
                }
            }
        }
        self.frontier = std::move(next);
        self.exhausted = self.frontier.empty();
        return std::nullopt;
    };

    while (!fwd.exhausted || !bwd.exhausted) {
        Side& smaller = (bwd.exhausted || (!fwd.exhausted && fwd.frontier.size() <= bwd.frontier.size()))
                            ? fwd
                            : bwd;
        const bool forward = &smaller == &fwd;
        auto done = expand_side(smaller, forward ? bwd : fwd, forward);
        if (done) return *done;
        if (fwd.exhausted && bwd.exhausted) break;
        if (smaller.exhausted && all_modular) break;
    }

    if (all_modular && (fwd.exhausted || bwd.exhausted)) {
        res.verdict = Verdict::Distinct;
        res.separation = Separation{"orbit", "finite orbit exhausted without a meeting state"};
        res.visited = visited;
        return res;
    }
    res.verdict = Verdict::Unknown;
    res.note = fwd.exhausted || bwd.exhausted
                   ? "search space exhausted within the magnitude bound " + std::to_string(bound)
                   : "frontiers stalled";
    res.visited = visited;
    return res;
}

ClassificationResult classify_pair(const hb::HandlebodyPresentation& a,
                                   const hb::HandlebodyPresentation& b,
                                   const SearchOptions& opts) {
    ClassificationResult res;
    if (a == b) {
        res.verdict = Verdict::Equivalent;
        return res;
    }
    Profile pa = profile(a);
    Profile pb = profile(b);
    if (auto sep = distinguish(pa, pb)) {
        res.verdict = Verdict::Distinct;
        res.separation = sep;
        return res;
    }
    if (is_almost_trivial(a) && is_almost_trivial(b)) {
        std::vector<InvariantDatum> ta, tb;
        for (const SequenceI& I : hb::canonical_sequences(pa.n)) {
            ta.push_back(pa.data.at(I));
            tb.push_back(pb.data.at(I));
        }
        return search_equivalence(ta, tb, opts);
    }
    res.verdict = Verdict::Unknown;
    res.note = "profiles agree but the inputs are not almost trivial; "
               "equivalence search does not apply";
    return res;
}

std::string to_string(const DiagonalMove& mv) {
    return hmx::to_string(hmx::Move{mv.kind, mv.component, mv.l, mv.h, mv.c}, "comp");
}

std::string to_string(const std::vector<DiagonalMove>& moves) {
    std::string s;
    for (const auto& mv : moves) {
        if (!s.empty()) s += "; ";
        s += to_string(mv);
    }
    return s;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "Equivalent";
        case Verdict::Distinct: return "Distinct";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

}  // namespace hbl::classify
