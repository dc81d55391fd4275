#pragma once

#include <span>

#include "crcs/types.hpp"

namespace crcs {

// Counts per distinct observation time (bit-identical ties).
TallyTable tally_discrete(std::span<const Observation> observations, int causes);

// Rounds each time to the representative of its interval and counts per
// representative. If every time already equals a representative exactly the
// times are taken as already rounded.
TallyTable tally_grouped(std::span<const Observation> observations,
                         const GroupingScheme& scheme, int causes);

// Observations rounded to their representatives (same rules as tally_grouped).
std::vector<Observation> round_to_scheme(std::span<const Observation> observations,
                                         const GroupingScheme& scheme);

// Largest status present, at least 1.
int infer_causes(std::span<const Observation> observations);

// One observation per counted subject, sorted by (time, status).
std::vector<Observation> expand(const TallyTable& tally);

}  // namespace crcs
