#include "hbl/handlebody.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace hbl::hb {

using magnus::Letter;
using magnus::Word;
using magnus::WordLink;

namespace {

WordLink build_link(const std::vector<Component>& components,
                    std::map<std::string, Word> longitudes) {
    std::vector<std::string> circles;
    for (const Component& c : components)
        circles.insert(circles.end(), c.circles.begin(), c.circles.end());
    return WordLink(std::move(circles), std::move(longitudes));
}

}  // namespace

HandlebodyPresentation::HandlebodyPresentation(std::vector<Component> components,
                                               std::map<std::string, Word> longitudes)
    : components_(std::move(components)), link_(build_link(components_, std::move(longitudes))) {
    if (components_.empty()) throw std::invalid_argument("presentation: no components");
    for (const Component& c : components_) {
        if (c.genus < 1) throw std::invalid_argument("presentation: genus must be >= 1");
        if (static_cast<int>(c.circles.size()) != c.genus)
            throw std::invalid_argument("presentation: circle count does not match genus");
    }
}

std::vector<int> HandlebodyPresentation::genera() const {
    std::vector<int> g;
    for (const Component& c : components_) g.push_back(c.genus);
    return g;
}

std::vector<SequenceI> canonical_sequences(int n) {
    if (n < 2) throw std::invalid_argument("canonical_sequences: need n >= 2");
    std::vector<int> middle;
    for (int i = 2; i <= n - 1; ++i) middle.push_back(i);
    std::vector<SequenceI> out;
    do {
        SequenceI I;
        I.push_back(1);
        I.insert(I.end(), middle.begin(), middle.end());
        I.push_back(n);
        out.push_back(std::move(I));
    } while (std::next_permutation(middle.begin(), middle.end()));
    return out;
}

void check_sequence(const HandlebodyPresentation& pres, const SequenceI& I) {
    if (I.size() < 2) throw std::invalid_argument("sequence must have length >= 2");
    std::vector<bool> seen(pres.component_count() + 1, false);
    for (int i : I) {
        if (i < 1 || i > pres.component_count())
            throw std::invalid_argument("sequence references component " + std::to_string(i) +
                                        " outside 1.." + std::to_string(pres.component_count()));
        if (seen[i]) throw std::invalid_argument("sequence repeats component " + std::to_string(i));
        seen[i] = true;
    }
}

namespace {

// gcd of |mu| over all circle selections for the given circle sequence shape
long long selection_gcd(const HandlebodyPresentation& pres, const SequenceI& J) {
    const int m = static_cast<int>(J.size());
    std::vector<int> sel(m, 1);
    long long g = 0;
    for (;;) {
        std::vector<std::string> circles;
        circles.reserve(m);
        for (int t = 0; t < m; ++t) circles.push_back(pres.circle(J[t], sel[t]));
        g = std::gcd(g, magnus::mu(pres.link(), circles));
        int t = m - 1;
        while (t >= 0 && sel[t] == pres.genus(J[t])) sel[t--] = 1;
        if (t < 0) break;
        ++sel[t];
    }
    return g;
}

}  // namespace

long long delta_I(const HandlebodyPresentation& pres, const SequenceI& I) {
    check_sequence(pres, I);
    const int m = static_cast<int>(I.size());
    long long g = 0;
    for (unsigned mask = 0; mask + 1 < (1u << m); ++mask) {
        const int kept = std::popcount(mask);
        if (kept < 2) continue;
        SequenceI J;
        for (int k = 0; k < m; ++k)
            if (mask & (1u << k)) J.push_back(I[k]);
        for (int rot = 0; rot < kept; ++rot) {
            g = std::gcd(g, selection_gcd(pres, J));
            std::rotate(J.begin(), J.begin() + 1, J.end());
        }
    }
    return g;
}

InvariantDatum hypermatrix_of(const HandlebodyPresentation& pres, const SequenceI& I) {
    check_sequence(pres, I);
    const int m = static_cast<int>(I.size());
    const long long delta = delta_I(pres, I);

    std::vector<int> dims;
    for (int i : I) dims.push_back(pres.genus(i));
    hmx::Hypermatrix matrix = hmx::Hypermatrix::zeros(dims, delta);

    std::vector<int> sel(m, 1);
    for (;;) {
        std::vector<std::string> circles;
        circles.reserve(m);
        for (int t = 0; t < m; ++t) circles.push_back(pres.circle(I[t], sel[t]));
        matrix.set(sel, magnus::mu(pres.link(), circles));
        int t = m - 1;
        while (t >= 0 && sel[t] == dims[t]) sel[t--] = 1;
        if (t < 0) break;
        ++sel[t];
    }
    return InvariantDatum{I, delta, std::move(matrix)};
}

HandlebodyPresentation from_clasper_schema(const ClasperSchema& s) {
    if (s.n < 2) throw std::invalid_argument("schema: need n >= 2");
    if (static_cast<int>(s.genera.size()) != s.n)
        throw std::invalid_argument("schema: genera count does not match n");
    for (int g : s.genera)
        if (g < 1) throw std::invalid_argument("schema: genus must be >= 1");

    const auto sequences = canonical_sequences(s.n);
    auto label = [](int comp, int k) { return "c" + std::to_string(comp) + "_" + std::to_string(k); };

    std::vector<Component> components;
    for (int i = 1; i <= s.n; ++i) {
        Component c;
        c.genus = s.genera[i - 1];
        for (int k = 1; k <= c.genus; ++k) c.circles.push_back(label(i, k));
        components.push_back(std::move(c));
    }

    for (const auto& [key, count] : s.counts) {
        const auto& [p, ks] = key;
        if (p < 1 || p > static_cast<int>(sequences.size()))
            throw std::invalid_argument("schema: permutation index out of range");
        if (static_cast<int>(ks.size()) != s.n)
            throw std::invalid_argument("schema: selection arity does not match n");
        for (int i = 1; i <= s.n; ++i)
            if (ks[i - 1] < 1 || ks[i - 1] > s.genera[i - 1])
                throw std::invalid_argument("schema: circle index out of range");
        (void)count;
    }

    // longitude of circle (n, k_n): product over p and lexicographic
    // (k_1..k_{n-1}) of the left-normed commutator along I_p, to the count
    std::map<std::string, Word> longitudes;
    for (const auto& [key, count] : s.counts) {
        if (count == 0) continue;
        const auto& [p, ks] = key;
        const SequenceI& I = sequences[p - 1];
        Word w;  // commutator ordered by I: [[...[m_{1,k_1}, m_{i2,k_i2}], ...], m_{i_{n-1},k}]
        for (int t = 0; t + 1 < s.n; ++t) {
            const int comp = I[t];
            Word m{Letter{label(comp, ks[comp - 1]), +1}};
            w = t == 0 ? m : magnus::commutator(w, m);
        }
        Word& lon = longitudes[label(s.n, ks[s.n - 1])];
        lon = magnus::concat(lon, magnus::power(w, count));
    }
    return HandlebodyPresentation(std::move(components), std::move(longitudes));
}

namespace {

long long det(const hmx::Matrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("apply_gl: matrices must be square");
    // fraction-free elimination, exact for the small sizes used here
    const int n = m.rows;
    std::vector<__int128> a(m.a.begin(), m.a.end());
    auto at = [&](int r, int c) -> __int128& { return a[static_cast<size_t>(r) * n + c]; };
    __int128 prev = 1;
    int sign = 1;
    for (int s = 0; s < n - 1; ++s) {
        if (at(s, s) == 0) {
            int r = s + 1;
            while (r < n && at(r, s) == 0) ++r;
            if (r == n) return 0;
            for (int c = 0; c < n; ++c) std::swap(at(s, c), at(r, c));
            sign = -sign;
        }
        for (int r = s + 1; r < n; ++r)
            for (int c = s + 1; c < n; ++c)
                at(r, c) = (at(r, c) * at(s, s) - at(r, s) * at(s, c)) / prev;
        prev = at(s, s);
    }
    return static_cast<long long>(sign * at(n - 1, n - 1));
}

}  // namespace

std::vector<InvariantDatum> apply_gl(const std::vector<InvariantDatum>& data,
                                     const std::vector<hmx::Matrix>& mats) {
    for (const auto& m : mats) {
        long long d = det(m);
        if (d != 1 && d != -1) throw std::invalid_argument("apply_gl: matrix is not unimodular");
    }
    std::vector<InvariantDatum> out;
    out.reserve(data.size());
    for (const InvariantDatum& datum : data) {
        const auto& dims = datum.matrix.dims();
        std::vector<long long> entries = datum.matrix.entries();
        // multiply along each axis in turn
        for (size_t axis = 0; axis < dims.size(); ++axis) {
            const int comp = datum.I[axis];
            if (comp < 1 || comp > static_cast<int>(mats.size()))
                throw std::invalid_argument("apply_gl: missing matrix for component " +
                                            std::to_string(comp));
            const hmx::Matrix& A = mats[comp - 1];
            if (A.rows != dims[axis])
                throw std::invalid_argument("apply_gl: matrix size does not match genus");
            size_t inner = 1;
            for (size_t i = axis + 1; i < dims.size(); ++i) inner *= static_cast<size_t>(dims[i]);
            size_t outer = 1;
            for (size_t i = 0; i < axis; ++i) outer *= static_cast<size_t>(dims[i]);
            const size_t g = static_cast<size_t>(dims[axis]);
            std::vector<long long> next(entries.size(), 0);
            for (size_t o = 0; o < outer; ++o)
                for (size_t r = 0; r < g; ++r)
                    for (size_t s = 0; s < g; ++s) {
                        const long long coef = A.at(static_cast<int>(r), static_cast<int>(s));
                        if (coef == 0) continue;
                        const size_t dst = (o * g + r) * inner;
                        const size_t src = (o * g + s) * inner;
                        for (size_t t = 0; t < inner; ++t) next[dst + t] += coef * entries[src + t];
                    }
            entries = std::move(next);
        }
        out.push_back(InvariantDatum{datum.I, datum.delta,
                                     hmx::Hypermatrix(dims, std::move(entries), datum.matrix.modulus())});
    }
    return out;
}

namespace {

std::map<std::string, Word> collect_longitudes(const HandlebodyPresentation& pres) {
    std::map<std::string, Word> out;
    for (const Component& c : pres.components())
        for (const std::string& circle : c.circles) {
            const Word& w = pres.link().longitude(circle);
            if (!w.empty()) out[circle] = w;
        }
    return out;
}

}  // namespace

HandlebodyPresentation reverse_circle(const HandlebodyPresentation& pres, const std::string& circle) {
    if (!pres.link().has_circle(circle))
        throw std::invalid_argument("reverse_circle: unknown circle '" + circle + "'");
    std::map<std::string, Word> longitudes = collect_longitudes(pres);
    for (auto& [label, w] : longitudes)
        for (Letter& l : w)
            if (l.circle == circle) l.sign = -l.sign;
    if (auto it = longitudes.find(circle); it != longitudes.end())
        it->second = magnus::invert(it->second);
    return HandlebodyPresentation(pres.components(), std::move(longitudes));
}

HandlebodyPresentation band_sum(const HandlebodyPresentation& pres, int comp, int l, int h) {
    if (comp < 1 || comp > pres.component_count())
        throw std::invalid_argument("band_sum: component out of range");
    const int g = pres.genus(comp);
    if (l < 1 || l > g || h < 1 || h > g || l == h)
        throw std::invalid_argument("band_sum: bad circle indices");
    std::map<std::string, Word> longitudes = collect_longitudes(pres);
    const Word merged =
        magnus::concat(pres.link().longitude(pres.circle(comp, l)), pres.link().longitude(pres.circle(comp, h)));
    if (merged.empty())
        longitudes.erase(pres.circle(comp, l));
    else
        longitudes[pres.circle(comp, l)] = merged;
    return HandlebodyPresentation(pres.components(), std::move(longitudes));
}

HandlebodyPresentation swap_circles(const HandlebodyPresentation& pres, int comp, int l, int h) {
    if (comp < 1 || comp > pres.component_count())
        throw std::invalid_argument("swap_circles: component out of range");
    const int g = pres.genus(comp);
    if (l < 1 || l > g || h < 1 || h > g || l == h)
        throw std::invalid_argument("swap_circles: bad circle indices");
    std::vector<Component> components = pres.components();
    std::swap(components[comp - 1].circles[l - 1], components[comp - 1].circles[h - 1]);
    return HandlebodyPresentation(std::move(components), collect_longitudes(pres));
}

}  // namespace hbl::hb
