#include "norms.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "runtime.hpp"

namespace paradin {
namespace {

double level_partial(const Field& f, NormKind kind) {
  double s = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double v : f.v) s += std::abs(v);
      break;
    case NormKind::L2:
      for (double v : f.v) s += v * v;
      break;
    case NormKind::Linf:
      for (double v : f.v) s = std::max(s, std::abs(v));
      break;
  }
  return s;
}

}  // namespace

NormKind parse_norm_kind(const std::string& name) {
  if (name == "L1" || name == "l1") return NormKind::L1;
  if (name == "L2" || name == "l2") return NormKind::L2;
  if (name == "Linf" || name == "linf" || name == "LInf") return NormKind::Linf;
  throw InvalidArgument("unknown norm '" + name + "' (expected L1, L2 or Linf)");
}

std::string norm_kind_name(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    default: return "Linf";
  }
}

double spatial_norm(const GridSpec& g, const Field& f, NormKind kind) {
  const double p = level_partial(f, kind);
  switch (kind) {
    case NormKind::L1: return g.hx * g.hy * p;
    case NormKind::L2: return std::sqrt(g.hx * g.hy * p);
    default: return p;
  }
}

double space_time_norm(const GridSpec& g, const std::vector<Field>& levels, NormKind kind) {
  std::vector<double> partials;
  partials.reserve(levels.size());
  for (const Field& f : levels) partials.push_back(level_partial(f, kind));
  if (kind == NormKind::Linf) {
    double m = 0.0;
    for (double p : partials) m = std::max(m, p);
    return m;
  }
  const double total = reduce_sum(partials);
  if (kind == NormKind::L1) return g.tau * g.hx * g.hy * total;
  return std::sqrt(g.tau * g.hx * g.hy * total);
}

}  // namespace paradin
