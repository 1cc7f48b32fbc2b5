#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace collar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Smallest denominator magnitude accepted by jet division; below this we
// refuse to evaluate rather than return garbage near a pole.
inline constexpr double kDivisionFloor = 1e-300;

struct singular_evaluation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct order_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned box, used for sampling regions and quadrature truncations.
struct Box {
  Vec min;
  Vec max;

  int dim() const { return static_cast<int>(min.size()); }
  Vec center() const { return 0.5 * (min + max); }
  Vec widths() const { return max - min; }
  bool contains(const Vec& x, double pad = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < min[i] - pad || x[i] > max[i] + pad) return false;
    return true;
  }
  Box scaled(double factor) const {
    Vec c = center();
    return Box{c + factor * (min - c), c + factor * (max - c)};
  }
};

// Deterministic parallel map: out[i] = fn(i). Chunks are assigned by index,
// every slot is written exactly once, so the result does not depend on the
// number of worker threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

int effective_thread_count(int requested);

}  // namespace collar
