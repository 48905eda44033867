#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gbnn/bitset.hpp"
#include "gbnn/message.hpp"

namespace gbnn {

// Per-fanal activation threshold sigma: a finite non-negative value or the
// lockout sentinel. A locked fanal is never admitted again.
class ActivationThreshold {
 public:
  constexpr ActivationThreshold() = default;
  static constexpr ActivationThreshold finite(double value) { return ActivationThreshold(value, false); }
  static constexpr ActivationThreshold locked() { return ActivationThreshold(0.0, true); }

  constexpr bool is_locked() const noexcept { return locked_; }
  // Value of a finite threshold; meaningless when locked.
  constexpr double value() const noexcept { return value_; }

  // theta >= sigma, with +inf never satisfied.
  constexpr bool admits(double theta) const noexcept { return !locked_ && theta >= value_; }

  friend constexpr bool operator==(const ActivationThreshold&, const ActivationThreshold&) = default;

 private:
  constexpr ActivationThreshold(double value, bool locked) : value_(value), locked_(locked) {}

  double value_ = 0.0;
  bool locked_ = false;
};

// Symmetric binary weight matrix stored as full n x n bit rows. Row r holds the
// neighbours of fanal r; the upper triangle is what gets serialized.
class WeightMatrix {
 public:
  explicit WeightMatrix(std::size_t n) : n_(n), stride_(words_for_bits(n)), bits_(n * stride_, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t stride() const noexcept { return stride_; }

  bool test(std::size_t a, std::size_t b) const noexcept {
    return (bits_[a * stride_ + (b >> 6)] >> (b & 63)) & 1U;
  }
  // Sets both (a,b) and (b,a). Returns true if the edge was new.
  bool connect(std::size_t a, std::size_t b) noexcept;

  std::span<const std::uint64_t> row(std::size_t a) const noexcept {
    return {bits_.data() + a * stride_, stride_};
  }

  std::size_t edge_count() const noexcept;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t n_;
  std::size_t stride_;
  std::vector<std::uint64_t> bits_;
};

// A clique network: chi-partite binary weights plus the per-run state
// (activity v and thresholds sigma).
//
// Copying a Network is cheap: copies share the weight matrix and own their
// activity and thresholds, so one stored network can be cloned per worker.
// store() detaches a shared matrix before writing.
class Network {
 public:
  explicit Network(NetworkShape shape);
  // Adopts an existing matrix. Throws std::invalid_argument on a size mismatch
  // or an intra-cluster edge.
  Network(NetworkShape shape, WeightMatrix weights);

  const NetworkShape& shape() const noexcept { return shape_; }
  std::size_t fanal_count() const noexcept { return shape_.fanal_count(); }

  // Stores m as a clique. Returns the number of edges that flipped 0 -> 1.
  // Throws std::invalid_argument if m is malformed or order(m) < 2.
  std::size_t store(const Message& m);

  bool connected(std::size_t a, std::size_t b) const noexcept { return weights_->test(a, b); }
  bool connected(const FanalId& a, const FanalId& b) const {
    return connected(shape_.flat(a), shape_.flat(b));
  }
  const WeightMatrix& weights() const noexcept { return *weights_; }
  std::span<const std::uint64_t> row(std::size_t flat) const noexcept { return weights_->row(flat); }
  std::size_t edge_count() const noexcept { return weights_->edge_count(); }
  bool shares_weights_with(const Network& other) const noexcept { return weights_ == other.weights_; }

  // Activates exactly the fanals of the probe; thresholds are left untouched.
  void insert_probe(const Message& probe);
  // All fanals idle, all thresholds 0. Weights untouched.
  void reset_state();

  bool is_active(std::size_t flat) const noexcept { return activity_.test(flat); }
  bool is_active(const FanalId& f) const { return is_active(shape_.flat(f)); }
  void set_active(std::size_t flat, bool active) noexcept { activity_.assign(flat, active); }
  void set_active(const FanalId& f, bool active) { set_active(shape_.flat(f), active); }
  const DynamicBitset& activity() const noexcept { return activity_; }
  DynamicBitset& activity() noexcept { return activity_; }
  std::size_t active_count() const noexcept { return activity_.count(); }
  // Ascending flat indices of active fanals.
  std::vector<std::uint32_t> active_fanals() const;
  void active_fanals(std::vector<std::uint32_t>& out) const;

  const ActivationThreshold& threshold(std::size_t flat) const noexcept { return thresholds_[flat]; }
  void set_threshold(std::size_t flat, ActivationThreshold t) noexcept { thresholds_[flat] = t; }
  void lock(std::size_t flat) noexcept { thresholds_[flat] = ActivationThreshold::locked(); }

 private:
  NetworkShape shape_;
  std::shared_ptr<WeightMatrix> weights_;
  DynamicBitset activity_;
  std::vector<ActivationThreshold> thresholds_;
};

}  // namespace gbnn
