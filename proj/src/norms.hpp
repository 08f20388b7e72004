// Volume-weighted discrete norms over the interior nodes.
//
// Spatial:    L2 = sqrt(hx*hy*sum e^2),   L1 = hx*hy*sum|e|,   Linf = max|e|.
// Space-time: the same with an extra factor tau inside (L2) or outside (L1)
// over all supplied time levels.
#pragma once

#include <string>
#include <vector>

#include "mesh.hpp"

namespace paradin {

enum class NormKind { L1, L2, Linf };

NormKind parse_norm_kind(const std::string& name);
std::string norm_kind_name(NormKind kind);

double spatial_norm(const GridSpec& g, const Field& f, NormKind kind);

// Weighted over any number of time levels; tau and the spacings come from g.
double space_time_norm(const GridSpec& g, const std::vector<Field>& levels, NormKind kind);

}  // namespace paradin
