// afdma.hpp - multi-user resource planning over one chirp-domain frame
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace afdm {

// Per-user planning inputs: band parameter L_u of the user's channel and the
// number of data slots the user wants.
struct AfdmaUser {
  int L = 0;
  int demand = 0;
};

enum class SlotRole : std::uint8_t { guard, pilot, data };

struct SlotAssign {
  SlotRole role = SlotRole::guard;
  int owner = -1;  // pilot: antenna (downlink) or user (uplink); data: user
};

// Inclusive index range.
struct SlotRange {
  int first = 0;
  int last = -1;
  int size() const { return last - first + 1; }
};

/**
 * A complete slot-by-slot frame plan. Downlink: base-station pilots at
 * (L_max+1)b - 1 surrounded by guards, then per-user data blocks D_u in
 * nondecreasing L_u order separated by minimal guards. Uplink: the frame is
 * partitioned into per-user blocks B_u, each containing that user's pilot
 * with L_u guards on both sides and data elsewhere in the block.
 */
struct AfdmaPlan {
  enum class Direction { downlink, uplink };
  Direction direction = Direction::downlink;
  int N = 0;
  int n_bs = 0;        // downlink only
  int L_max_plan = 0;  // downlink: guard sizing around pilots
  std::vector<AfdmaUser> users;
  std::vector<SlotAssign> slots;       // length N
  std::vector<int> pilot_slots;        // downlink: per BS antenna; uplink: per user
  std::vector<SlotRange> data_blocks;  // D_u per user
  std::vector<SlotRange> user_blocks;  // uplink B_u per user

  // Non-data slots of the whole frame.
  long long overhead_slots() const;
  // Plain-text table, run-length encoded: "first-last role owner".
  std::string to_table() const;
};

// Eq.-style downlink overhead: (n_bs+1) L_max + n_bs + sum_{u>=2} L_u.
long long afdma_downlink_overhead(int n_bs, int L_max_plan,
                                  const std::vector<AfdmaUser>& users);

// users must be sorted by nondecreasing L and fit the frame; demands may
// under-fill capacity (the tail is padded with guards) but never exceed it.
AfdmaPlan plan_afdma_downlink(int N, const std::vector<AfdmaUser>& users,
                              int L_max_plan, int n_bs);

// Blocks sized demand + 2L_u + 1 are laid out in user order; total must not
// exceed N (tail padded with guards when smaller).
AfdmaPlan plan_afdma_uplink(int N, const std::vector<AfdmaUser>& users);

// Independent slot-occupancy check: rebuilds occupancy from the plan's block
// and pilot lists, then verifies collision freedom, guard minima around
// every pilot and data block, demand satisfaction, and overhead accounting.
struct PlanCheck {
  bool ok = true;
  std::vector<std::string> violations;
};
PlanCheck validate_plan(const AfdmaPlan& plan);

}  // namespace afdm
