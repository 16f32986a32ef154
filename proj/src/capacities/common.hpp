#pragma once

#include <set>
#include <string>
#include <utility>

#include "ssclab/capacities.hpp"

namespace ssclab::detail {

inline Labels concat(const Labels& a, const Labels& b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline std::string fresh_label(std::string base, const std::set<std::string>& taken) {
    while (taken.count(base)) base += "'";
    return base;
}

inline std::set<std::string> label_set(const LabeledState& s) {
    const auto l = s.labels();
    return {l.begin(), l.end()};
}

/// Pure copy of psi with its parties (purifying mixed inputs into Eve).
inline std::pair<LabeledState, Parties> ensure_pure(const LabeledState& psi, const Parties& p) {
    Parties q = p;
    LabeledState s = prepare_pure(psi, q);
    return {std::move(s), std::move(q)};
}

/// psi with the split isometry applied on Alice's registers.
LabeledState apply_split(const LabeledState& psi, const Parties& p, const SplittingCertificate& split);

}  // namespace ssclab::detail
