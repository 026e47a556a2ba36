#pragma once

#include <map>
#include <string>
#include <vector>

#include "hbl/hypermatrix.hpp"
#include "hbl/magnus.hpp"

namespace hbl::hb {

/// One handlebody component: its genus and the ordered labels of the circles
/// spanning its first homology.
struct Component {
    int genus = 1;
    std::vector<std::string> circles;

    friend bool operator==(const Component&, const Component&) = default;
};

/// Sequence of distinct component numbers (1-based), length >= 2.
using SequenceI = std::vector<int>;

/// A handlebody-link given by words: globally unique circle labels grouped
/// into components, one longitude word per circle.
class HandlebodyPresentation {
  public:
    HandlebodyPresentation(std::vector<Component> components,
                           std::map<std::string, magnus::Word> longitudes);

    int component_count() const { return static_cast<int>(components_.size()); }
    const std::vector<Component>& components() const { return components_; }
    int genus(int comp) const { return components_[comp - 1].genus; }
    std::vector<int> genera() const;
    const std::string& circle(int comp, int k) const { return components_[comp - 1].circles[k - 1]; }
    const magnus::WordLink& link() const { return link_; }

    friend bool operator==(const HandlebodyPresentation& a, const HandlebodyPresentation& b) {
        return a.components_ == b.components_ && a.link_ == b.link_;
    }

  private:
    std::vector<Component> components_;
    magnus::WordLink link_;
};

/// The invariant attached to one sequence I: its indeterminacy and the
/// hypermatrix of mu-bar values over circle selections, reduced mod delta.
struct InvariantDatum {
    SequenceI I;
    long long delta = 0;
    hmx::Hypermatrix matrix;

    friend bool operator==(const InvariantDatum&, const InvariantDatum&) = default;
};

/// Counts of parallel tree claspers: key (p, k_1..k_n) -> signed multiplicity,
/// where p indexes the canonical sequence I_p and k_i selects a circle of
/// component i. Negative counts are half-twisted trees.
struct ClasperSchema {
    int n = 2;
    std::vector<int> genera;
    std::map<std::pair<int, std::vector<int>>, long long> counts;
};

/// I_p = 1 sigma_p(2) ... sigma_p(n-1) n for the (n-2)! permutations sigma_p
/// of {2,...,n-1} in lexicographic order.
std::vector<SequenceI> canonical_sequences(int n);

void check_sequence(const HandlebodyPresentation& pres, const SequenceI& I);

/// gcd over all proper cyclic subsequences J of I and all circle selections
/// of |mu|; zero when |I| = 2.
long long delta_I(const HandlebodyPresentation& pres, const SequenceI& I);

/// Entry (k_1..k_m) = mu of the sublink selecting circle k_j from component
/// i_j, for the sequence I as given (measured component last), reduced mod
/// delta_I.
InvariantDatum hypermatrix_of(const HandlebodyPresentation& pres, const SequenceI& I);

/// Longitudes of the n-th component's circles carry one left-normed iterated
/// commutator per count; all other longitudes are empty. Circle labels are
/// c<i>_<j>.
HandlebodyPresentation from_clasper_schema(const ClasperSchema& s);

/// Simultaneous action of one unimodular matrix per component on every
/// datum; mats[i-1] acts on the axis of component i. Entries reduced mod
/// each datum's modulus.
std::vector<InvariantDatum> apply_gl(const std::vector<InvariantDatum>& data,
                                     const std::vector<hmx::Matrix>& mats);

/// Inverts every occurrence of the circle's meridian and replaces its own
/// longitude by its inverse.
HandlebodyPresentation reverse_circle(const HandlebodyPresentation& pres, const std::string& circle);

/// Longitude of circle (i,l) becomes longitude(i,l) * longitude(i,h); all
/// else unchanged. Invariants through the banded circle are read with
/// component i rotated last.
HandlebodyPresentation band_sum(const HandlebodyPresentation& pres, int comp, int l, int h);

/// Exchanges circles l and h of component i (basis reordering).
HandlebodyPresentation swap_circles(const HandlebodyPresentation& pres, int comp, int l, int h);

}  // namespace hbl::hb
