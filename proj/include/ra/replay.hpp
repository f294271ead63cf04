#pragma once

#include <cstddef>
#include <vector>

#include "ra/rng.hpp"
#include "ra/types.hpp"

namespace ra {

// Stored interaction step, with margins cached at insertion time so target
// computation never re-queries the environment.
struct Transition {
  Vec s;
  int a = 0;
  Vec s2;
  bool terminal = false;
  Margins at_s;
  Margins at_s2;
};

// Fixed-capacity ring buffer with uniform batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return data_[i]; }

  // Distinct indices, uniform over the stored transitions (Floyd's
  // algorithm).  Throws if batch exceeds the stored count.
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

 private:
  std::vector<Transition> data_;
  std::size_t next_ = 0;
  std::size_t capacity_;
};

}  // namespace ra
