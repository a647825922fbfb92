#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace branched {

struct Atom {
  double mass = 0.0;
  double position = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finite sum of positive point masses on the line.
///
/// Atoms are stored sorted by position. Atoms closer than
/// 1e-14 * max(1, |x|) are merged into one (masses add). Construction throws
/// PreconditionError for non-positive or non-finite masses, non-finite
/// positions, or an empty atom list.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(std::vector<Atom> atoms);

  static AtomicMeasure dirac(double position, double mass = 1.0);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// Constant density mass/width on [center - width/2, center + width/2].
class UniformSegment {
 public:
  UniformSegment(double center, double width, double mass);

  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  double mass() const noexcept { return mass_; }
  double left() const noexcept { return center_ - 0.5 * width_; }
  double right() const noexcept { return center_ + 0.5 * width_; }
  double density() const noexcept { return mass_ / width_; }

 private:
  double center_;
  double width_;
  double mass_;
};

double total_mass(const AtomicMeasure& m);
double total_mass(const UniformSegment& u);

double barycenter(const AtomicMeasure& m);
double barycenter(const UniformSegment& u);

/// Squared 2-Wasserstein distance between two atomic measures of equal mass,
/// from the monotone coupling of their quantile functions.
/// Throws MassMismatchError if the masses differ by more than 1e-12 relative.
double w2_squared(const AtomicMeasure& a, const AtomicMeasure& b);

/// Squared 2-Wasserstein distance between an atomic measure and a uniform
/// segment of equal mass. Each atom is sent to the consecutive sub-interval
/// carrying its mass; piece costs use the exact cubic antiderivative.
double w2_squared(const AtomicMeasure& a, const UniformSegment& u);

/// Relative tolerance used for all equal-mass preconditions.
inline constexpr double kMassTolerance = 1e-12;

}  // namespace branched
