#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace anticoord {

// Channels are numbered 1..C; 0 means "stay quiet".
using Channel = std::uint32_t;
using Signal = std::uint32_t;

inline constexpr Channel kQuiet = 0;

// An agent's learned mapping from coordination-signal value to the channel it
// transmits on. Cardinality (number of non-quiet entries) is kept in sync on
// every write because the cardinality-aware back-off schemes query it on each
// collision.
class StrategyTable {
 public:
  StrategyTable() = default;
  explicit StrategyTable(std::size_t n_signals) : entries_(n_signals, kQuiet) {}
  explicit StrategyTable(std::vector<Channel> entries);

  std::size_t size() const { return entries_.size(); }
  Channel operator[](Signal k) const { return entries_[k]; }
  std::span<const Channel> entries() const { return entries_; }
  std::size_t cardinality() const { return cardinality_; }

  void set(Signal k, Channel c);

  // Throws ConfigError unless size() == n_signals and every entry is in 0..n_channels.
  void validate(std::size_t n_signals, std::size_t n_channels) const;

  bool operator==(const StrategyTable&) const = default;

 private:
  std::vector<Channel> entries_;
  std::size_t cardinality_ = 0;
};

}  // namespace anticoord
