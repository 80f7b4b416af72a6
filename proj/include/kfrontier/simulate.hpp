#pragma once

#include "kfrontier/frontier.hpp"
#include "kfrontier/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

enum class SamplingMode
{
  poisson,
  binomial
};

std::string_view to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(std::string_view name);

struct Point
{
  double x;
  double y;

  friend bool operator==(const Point&, const Point&) = default;
};

//! One realization of the observation process inside S.
struct PointSet
{
  std::vector<Point> points;
  double intensity = 0.0; //!< n: expected (poisson) or exact (binomial) count
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::poisson;
  std::string frontier_id;

  friend bool operator==(const PointSet&, const PointSet&) = default;
};

//! Hard cap on rejection proposals for a single realization.
inline constexpr std::uint64_t max_proposals = 1'000'000'000ULL;

//! Draws `count` i.i.d. uniform points on S by rejection from the box
//! [0, 1] x [0, M] and hands each accepted point to `sink`. Throws
//! SamplingError when the proposal cap is exhausted.
template<class Sink>
void sample_uniform_on_support(const FrontierSpec& spec,
                               std::uint64_t count,
                               Rng& rng,
                               Sink&& sink);

//! Poisson process with mean measure n c lambda on S: a Poisson(n) count of
//! uniform points. Deterministic in (spec, n, seed). Requires n >= 1.
PointSet sample_poisson(const FrontierSpec& spec, double n, std::uint64_t seed);

//! Exactly n uniform points on S. Requires n >= 1.
PointSet sample_binomial(const FrontierSpec& spec,
                         std::uint64_t n,
                         std::uint64_t seed);

//! CSV with header `x,y`, 17 significant digits.
void write_points_csv(const PointSet& points, std::ostream& out);
//! Reads `x,y` CSV; metadata fields are left at their defaults.
std::vector<Point> read_points_csv(std::istream& in);

//! Sidecar metadata (seed, n, mode, frontier id, count) as a JSON document.
std::string points_metadata_json(const PointSet& points);

// -- implementation --------------------------------------------------------

[[noreturn]] void throw_proposal_cap(const FrontierSpec& spec);

template<class Sink>
void sample_uniform_on_support(const FrontierSpec& spec,
                               std::uint64_t count,
                               Rng& rng,
                               Sink&& sink)
{
  const double height = spec.upper_bound();
  std::uint64_t proposals = 0;
  for (std::uint64_t accepted = 0; accepted < count;) {
    if (++proposals > max_proposals) {
      throw_proposal_cap(spec);
    }
    const double x = rng.uniform();
    const double y = height * rng.uniform();
    if (y <= spec(x)) {
      sink(Point{ x, y });
      ++accepted;
    }
  }
}

} // namespace kfrontier
