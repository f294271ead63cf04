#include "ra/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace ra {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  data_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);  // overwrite the oldest
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  if (batch > data_.size())
    throw std::invalid_argument("ReplayBuffer: batch exceeds stored transitions");
  std::vector<std::size_t> out;
  out.reserve(batch);
  // Floyd's sampling: each index distinct, uniform over subsets.
  for (std::size_t j = data_.size() - batch; j < data_.size(); ++j) {
    std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(j);
    else
      out.push_back(t);
  }
  return out;
}

}  // namespace ra
