#pragma once

// JSON/CSV serialization of reports. Key names match the struct fields; the
// JSON forms are stable (insertion-ordered keys) so that repeated runs can be
// compared byte for byte.

#include <string>
#include <vector>

#include "json.hpp"
#include "pag/enumerate.hpp"
#include "pag/exact_law.hpp"
#include "pag/size_bias.hpp"
#include "pag/stein.hpp"

namespace pag {

using ordered_json = nlohmann::ordered_json;

// Distribution over counts as an object keyed by the count's decimal string;
// zero-probability entries are omitted.
ordered_json sparse_dist_json(const std::vector<double>& dist);

ordered_json to_json(const McReport& rep);
ordered_json to_json(const SteinBoundReport& rep);
ordered_json to_json(const RateFit& fit);
ordered_json to_json(const DegreeDistReport& rep);
ordered_json to_json(const ExactEnumeration& en);
ordered_json to_json(const IndegreeLawTable& table);

const char* regime_name(Regime regime);

// One row per sample: `w,w_s,i,d,deg_pos,r` under that header, LF endings.
std::string couple_csv(const std::vector<CouplingSample>& samples);
// Rate-fit points: `n,d_w,reps,seed`.
std::string rate_points_csv(const std::vector<RatePoint>& points);

}  // namespace pag
