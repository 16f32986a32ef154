#pragma once

// Where a map's outputs land inside a larger labeled state.

#include "ssclab/qcore.hpp"

namespace ssclab::detail {

struct Placement {
    Labels working_order;         // [on..., rest...]
    std::vector<Subsystem> rest;  // spectators in state order
    std::size_t rest_dim = 1;
    std::size_t insert_at = 0;    // index among spectators where outputs go
};

Placement place(const LabeledState& s, const Labels& on, std::size_t expected_dim,
                const std::vector<Subsystem>& outputs, const char* what);
LabeledState finish(const Placement& p, const std::vector<Subsystem>& outputs, LabeledState working);

}  // namespace ssclab::detail
