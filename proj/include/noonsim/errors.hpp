#pragma once

#include <stdexcept>

namespace noonsim {

// Requested truncation cannot hold the state to the tail tolerance.
// achieved_tail is the probability mass that would be lost.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_tail)
      : std::runtime_error(what), achieved_tail_(achieved_tail) {}
  double achieved_tail() const { return achieved_tail_; }

 private:
  double achieved_tail_;
};

// The conditioning measurement has probability zero (e.g. subtracting
// photons from vacuum); no conditional state exists.
class ZeroProbabilityHerald : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative numeric procedure failed to converge or to bracket a root.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noonsim
