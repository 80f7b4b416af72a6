#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

//! Extremes of the frontier over a closed interval.
struct Extrema
{
  double min;
  double max;
};

//! The upper boundary f of the support S = {(x, y) : 0 <= x <= 1,
//! 0 <= y <= f(x)} together with its regularity metadata.
//!
//! f is strictly positive and alpha-Hoelder on [0, 1] with constant L_f and
//! vanishes outside [0, 1]. Instances are immutable after construction and
//! safe to share between threads.
class FrontierSpec
{
public:
  using Function = std::function<double(double)>;

  //! Optional closed forms supplied by catalog entries.
  struct Extras
  {
    std::optional<double> exact_area;
    //! Antiderivative of f on [0, 1], used for exact cell integrals.
    Function primitive;
    //! Exact min/max of f on [a, b].
    std::function<Extrema(double, double)> extrema;
    //! Points where f is not differentiable; used to split quadrature.
    std::vector<double> kinks;
  };

  //! Validates the metadata on a dense grid (m <= f <= M, m > 0) and computes
  //! the area, by quadrature when no closed form is supplied.
  FrontierSpec(std::string id,
               Function f,
               double alpha,
               double lipschitz_const,
               double lower_bound,
               double upper_bound,
               Extras extras = {});

  const std::string& id() const { return id_; }
  double alpha() const { return alpha_; }
  double lipschitz_const() const { return lipschitz_; }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  double area() const { return area_; }
  double normalizer() const { return 1.0 / area_; }
  const std::vector<double>& kinks() const { return extras_.kinks; }

  //! f(x) on [0, 1], 0 elsewhere.
  double operator()(double x) const
  {
    return (x < 0.0 || x > 1.0) ? 0.0 : f_(x);
  }

  //! Integral of f over [a, b], with 0 <= a <= b <= 1.
  double integral(double a, double b) const;

  //! Bounds on f over [a, b]. Exact for catalog entries with a closed form;
  //! otherwise conservative (dense sampling widened by the Hoelder modulus).
  Extrema extrema(double a, double b) const;

  //! The frontier s * f, with every piece of metadata rescaled.
  FrontierSpec scaled(double s) const;

private:
  std::string id_;
  Function f_;
  double alpha_;
  double lipschitz_;
  double lower_;
  double upper_;
  Extras extras_;
  double area_ = 0.0;
};

double eval_frontier(const FrontierSpec& spec, double x);

struct AreaResult
{
  double area;
  double normalizer;
};

//! lambda(S) = int_0^1 f and c = 1 / lambda(S).
AreaResult region_area(const FrontierSpec& spec);

//! Largest |f(x) - f(y)| / |x - y|^alpha over pairs of an equispaced grid of
//! `grid_size` points on [0, 1]. Callers compare the result against L_f.
double lipschitz_audit(const FrontierSpec& spec, std::size_t grid_size);
double lipschitz_audit(const std::function<double(double)>& f,
                       double alpha,
                       std::size_t grid_size);

namespace catalog {

FrontierSpec flat(double level);
//! f(x) = a + b x.
FrontierSpec affine(double a, double b);
//! f(x) = a + b sin(omega x).
FrontierSpec sine(double a, double b, double omega);
//! Piecewise linear: a at both ends rising to a + b at `peak`.
FrontierSpec tent(double a, double b, double peak);
//! f(x) = a + b |x - 1/2|^alpha; exactly alpha-Hoelder with constant b.
FrontierSpec cusp(double a, double b, double alpha);
//! Truncated Weierstrass series a + b sum_{j<terms} 2^{-j alpha}
//! cos(2^j pi x), rough at every scale down to 2^{-terms}.
FrontierSpec weierstrass(double a, double b, double alpha, int terms);

} // namespace catalog

//! Parses a catalog name such as "flat:1.0", "affine:1.0:0.5",
//! "sine:1.0:0.3:6.0", "tent:1:0.5:0.5", "cusp:1:0.5:0.5" or
//! "weierstrass:2:0.3:0.5:8". Throws ConfigError on unknown names.
FrontierSpec make_frontier(std::string_view name);

} // namespace kfrontier
