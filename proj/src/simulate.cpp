#include "kfrontier/simulate.hpp"

#include "kfrontier/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace kfrontier {

std::string_view to_string(SamplingMode mode)
{
  return mode == SamplingMode::poisson ? "poisson" : "binomial";
}

SamplingMode sampling_mode_from_string(std::string_view name)
{
  if (name == "poisson") {
    return SamplingMode::poisson;
  }
  if (name == "binomial") {
    return SamplingMode::binomial;
  }
  throw ConfigError("unknown sampling mode '" + std::string(name) +
                    "' (expected poisson or binomial)");
}

void throw_proposal_cap(const FrontierSpec& spec)
{
  throw SamplingError("rejection sampler exceeded " +
                      std::to_string(max_proposals) +
                      " proposals for frontier " + spec.id());
}

PointSet sample_poisson(const FrontierSpec& spec, double n, std::uint64_t seed)
{
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw ConfigError("sample_poisson: n must be >= 1");
  }
  Rng rng(seed);
  PointSet out;
  out.intensity = n;
  out.seed = seed;
  out.mode = SamplingMode::poisson;
  out.frontier_id = spec.id();
  const std::uint64_t count = rng.poisson(n);
  out.points.reserve(count);
  sample_uniform_on_support(spec, count, rng,
                            [&](Point p) { out.points.push_back(p); });
  return out;
}

PointSet sample_binomial(const FrontierSpec& spec,
                         std::uint64_t n,
                         std::uint64_t seed)
{
  if (n < 1) {
    throw ConfigError("sample_binomial: n must be >= 1");
  }
  Rng rng(seed);
  PointSet out;
  out.intensity = static_cast<double>(n);
  out.seed = seed;
  out.mode = SamplingMode::binomial;
  out.frontier_id = spec.id();
  out.points.reserve(n);
  sample_uniform_on_support(spec, n, rng,
                            [&](Point p) { out.points.push_back(p); });
  return out;
}

void write_points_csv(const PointSet& points, std::ostream& out)
{
  out << "x,y\n";
  char line[64];
  for (const auto& p : points.points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", p.x, p.y);
    out << line;
  }
}

std::vector<Point> read_points_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("points CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "x,y") {
    throw ConfigError("points CSV must start with header 'x,y', got '" + line +
                      "'");
  }
  std::vector<Point> points;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") {
      continue;
    }
    Point p{};
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf%c", &p.x, &p.y, &tail) < 2 ||
        (tail != 0 && tail != '\r')) {
      throw ConfigError("points CSV row " + std::to_string(row) +
                        " is malformed: '" + line + "'");
    }
    points.push_back(p);
  }
  return points;
}

std::string points_metadata_json(const PointSet& points)
{
  nlohmann::ordered_json j;
  j["schema"] = "kfrontier.points/1";
  j["frontier"] = points.frontier_id;
  j["mode"] = std::string(to_string(points.mode));
  j["n"] = points.intensity;
  j["seed"] = points.seed;
  j["count"] = points.points.size();
  return j.dump(2) + "\n";
}

} // namespace kfrontier
