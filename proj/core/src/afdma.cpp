// afdma.cpp
#include "afdm/afdma.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace afdm {

namespace {

const char* role_name(SlotRole r) {
  switch (r) {
    case SlotRole::guard: return "guard";
    case SlotRole::pilot: return "pilot";
    case SlotRole::data: return "data";
  }
  return "?";
}

void claim(std::vector<SlotAssign>& slots, int idx, SlotRole role, int owner,
           const char* who) {
  SlotAssign& s = slots.at(idx);
  if (s.role != SlotRole::guard || s.owner != -1)
    throw std::logic_error(std::string(who) + ": slot claimed twice");
  s = {role, owner};
}

// Cyclic count of guard slots walking from `from` in direction `step`.
int guard_run(const std::vector<SlotAssign>& slots, int from, int step) {
  const int N = static_cast<int>(slots.size());
  int run = 0;
  int idx = from;
  for (int i = 0; i < N; ++i) {
    idx = (idx + step + N) % N;
    if (slots[idx].role != SlotRole::guard) break;
    ++run;
  }
  return run;
}

}  // namespace

long long AfdmaPlan::overhead_slots() const {
  long long data = 0;
  for (const SlotAssign& s : slots)
    if (s.role == SlotRole::data) ++data;
  return static_cast<long long>(N) - data;
}

std::string AfdmaPlan::to_table() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "plan %s N=%d users=%zu",
                direction == Direction::downlink ? "downlink" : "uplink", N,
                users.size());
  out += line;
  if (direction == Direction::downlink) {
    std::snprintf(line, sizeof(line), " n_bs=%d L_max=%d", n_bs, L_max_plan);
    out += line;
  }
  out += "\n";
  for (size_t u = 0; u < users.size(); ++u) {
    const SlotRange& span = direction == Direction::downlink
                                ? data_blocks[u]
                                : user_blocks[u];
    std::snprintf(line, sizeof(line), "user %zu L=%d demand=%d span=%d-%d\n", u,
                  users[u].L, users[u].demand, span.first, span.last);
    out += line;
  }
  out += "slots:\n";
  for (int i = 0; i < N;) {
    int j = i;
    while (j + 1 < N && slots[j + 1].role == slots[i].role &&
           slots[j + 1].owner == slots[i].owner)
      ++j;
    if (slots[i].owner >= 0)
      std::snprintf(line, sizeof(line), "%d-%d %s %d\n", i, j,
                    role_name(slots[i].role), slots[i].owner);
    else
      std::snprintf(line, sizeof(line), "%d-%d %s -\n", i, j,
                    role_name(slots[i].role));
    out += line;
    i = j + 1;
  }
  return out;
}

long long afdma_downlink_overhead(int n_bs, int L_max_plan,
                                  const std::vector<AfdmaUser>& users) {
  long long o = static_cast<long long>(n_bs + 1) * L_max_plan + n_bs;
  for (size_t u = 1; u < users.size(); ++u) o += users[u].L;
  return o;
}

AfdmaPlan plan_afdma_downlink(int N, const std::vector<AfdmaUser>& users,
                              int L_max_plan, int n_bs) {
  if (users.empty()) throw std::invalid_argument("plan_afdma_downlink: no users");
  if (n_bs < 1) throw std::invalid_argument("plan_afdma_downlink: n_bs >= 1");
  for (size_t u = 0; u < users.size(); ++u) {
    if (users[u].L < 0 || users[u].demand < 0)
      throw std::invalid_argument("plan_afdma_downlink: negative user field");
    if (u > 0 && users[u - 1].L > users[u].L)
      throw std::invalid_argument(
          "plan_afdma_downlink: users must be sorted by nondecreasing L");
  }
  if (users.back().L > L_max_plan)
    throw std::invalid_argument(
        "plan_afdma_downlink: user band exceeds L_max_plan");

  const long long overhead = afdma_downlink_overhead(n_bs, L_max_plan, users);
  long long demand_sum = 0;
  for (const AfdmaUser& u : users) demand_sum += u.demand;
  if (overhead + demand_sum > N)
    throw std::invalid_argument(
        "plan_afdma_downlink: demands exceed frame capacity");

  AfdmaPlan plan;
  plan.direction = AfdmaPlan::Direction::downlink;
  plan.N = N;
  plan.n_bs = n_bs;
  plan.L_max_plan = L_max_plan;
  plan.users = users;
  plan.slots.assign(N, SlotAssign{});

  for (int b = 0; b < n_bs; ++b) {
    const int slot = (L_max_plan + 1) * (b + 1) - 1;
    plan.pilot_slots.push_back(slot);
    claim(plan.slots, slot, SlotRole::pilot, b, "plan_afdma_downlink");
  }

  int cursor = (L_max_plan + 1) * n_bs + L_max_plan;  // first data slot
  for (size_t u = 0; u < users.size(); ++u) {
    if (u > 0) cursor += users[u].L;  // guard run sized by the wider neighbor
    SlotRange d{cursor, cursor + users[u].demand - 1};
    for (int i = d.first; i <= d.last; ++i)
      claim(plan.slots, i, SlotRole::data, static_cast<int>(u),
            "plan_afdma_downlink");
    plan.data_blocks.push_back(d);
    cursor = d.last + 1;
  }
  // Any remaining tail stays guard (padding when demands under-fill).
  return plan;
}

AfdmaPlan plan_afdma_uplink(int N, const std::vector<AfdmaUser>& users) {
  if (users.empty()) throw std::invalid_argument("plan_afdma_uplink: no users");
  long long needed = 0;
  for (const AfdmaUser& u : users) {
    if (u.L < 0 || u.demand < 0)
      throw std::invalid_argument("plan_afdma_uplink: negative user field");
    needed += 2LL * u.L + 1 + u.demand;
  }
  if (needed > N)
    throw std::invalid_argument("plan_afdma_uplink: blocks exceed frame");

  AfdmaPlan plan;
  plan.direction = AfdmaPlan::Direction::uplink;
  plan.N = N;
  plan.users = users;
  plan.slots.assign(N, SlotAssign{});

  int cursor = 0;
  for (size_t u = 0; u < users.size(); ++u) {
    const AfdmaUser& usr = users[u];
    const int block_size = usr.demand + 2 * usr.L + 1;
    SlotRange block{cursor, cursor + block_size - 1};
    plan.user_blocks.push_back(block);

    // Pilot near the block center, L_u guards on each side, data around.
    const int head_data = (usr.demand + 1) / 2;
    const int pilot = block.first + head_data + usr.L;
    plan.pilot_slots.push_back(pilot);
    for (int i = 0; i < head_data; ++i)
      claim(plan.slots, block.first + i, SlotRole::data, static_cast<int>(u),
            "plan_afdma_uplink");
    claim(plan.slots, pilot, SlotRole::pilot, static_cast<int>(u),
          "plan_afdma_uplink");
    for (int i = pilot + usr.L + 1; i <= block.last; ++i)
      claim(plan.slots, i, SlotRole::data, static_cast<int>(u),
            "plan_afdma_uplink");
    plan.data_blocks.push_back(block);  // data lives inside the block
    cursor = block.last + 1;
  }
  // Trailing slots (if any) stay guard padding outside every block.
  return plan;
}

PlanCheck validate_plan(const AfdmaPlan& plan) {
  PlanCheck check;
  auto fail = [&check](std::string msg) {
    check.ok = false;
    check.violations.push_back(std::move(msg));
  };
  const int N = plan.N;
  if (static_cast<int>(plan.slots.size()) != N) {
    fail("slot table length != N");
    return check;
  }
  if (plan.users.size() != plan.data_blocks.size()) {
    fail("one data block per user required");
    return check;
  }

  // Re-derive occupancy from the declared pilots and blocks alone, then
  // compare against the slot table. Double claims surface as hit counts > 1.
  std::vector<int> hits(N, 0);
  auto mark = [&](int idx, const char* what) {
    if (idx < 0 || idx >= N) fail(std::string(what) + " slot out of range");
    else ++hits[idx];
  };
  for (int p : plan.pilot_slots) mark(p, "pilot");

  if (plan.direction == AfdmaPlan::Direction::downlink) {
    for (size_t u = 0; u < plan.data_blocks.size(); ++u) {
      const SlotRange& d = plan.data_blocks[u];
      if (d.size() != plan.users[u].demand)
        fail("user " + std::to_string(u) + " block size != demand");
      for (int i = d.first; i <= d.last; ++i) mark(i, "data");
    }
  } else {
    // Uplink blocks partition the frame head; inside each block the pilot
    // splits data from its two guard runs.
    int cursor = 0;
    for (size_t u = 0; u < plan.user_blocks.size(); ++u) {
      const SlotRange& block = plan.user_blocks[u];
      const AfdmaUser& usr = plan.users[u];
      if (block.first != cursor)
        fail("block " + std::to_string(u) + " not contiguous");
      cursor = block.last + 1;
      if (block.size() != usr.demand + 2 * usr.L + 1)
        fail("block " + std::to_string(u) + " size != demand + 2 L_u + 1");
      const int pilot = plan.pilot_slots[u];
      if (pilot < block.first || pilot > block.last)
        fail("pilot " + std::to_string(u) + " outside its block");
      int data = 0;
      for (int i = block.first; i <= block.last; ++i) {
        if (plan.slots[i].role == SlotRole::data) {
          mark(i, "data");
          ++data;
        }
      }
      if (data != usr.demand)
        fail("user " + std::to_string(u) + " data slots != demand");
    }
    for (int i = cursor; i < N; ++i)
      if (plan.slots[i].role != SlotRole::guard)
        fail("non-guard slot beyond the last block");
  }

  for (int i = 0; i < N; ++i) {
    if (hits[i] > 1) {
      fail("slot " + std::to_string(i) + " claimed " +
           std::to_string(hits[i]) + " times");
      break;
    }
    const bool occupied = plan.slots[i].role != SlotRole::guard;
    if (occupied != (hits[i] == 1)) {
      fail("slot table disagrees with declared blocks at " +
           std::to_string(i));
      break;
    }
  }

  // Guard minima. Around pilots the requirement is the largest user band in
  // the downlink (every user must read every pilot) and the owner's band in
  // the uplink.
  int max_user_L = 0;
  for (const AfdmaUser& u : plan.users) max_user_L = std::max(max_user_L, u.L);
  for (size_t b = 0; b < plan.pilot_slots.size(); ++b) {
    const int need = plan.direction == AfdmaPlan::Direction::downlink
                         ? max_user_L
                         : plan.users[b].L;
    const int p = plan.pilot_slots[b];
    if (guard_run(plan.slots, p, -1) < need)
      fail("pilot " + std::to_string(b) + " leading guard < " +
           std::to_string(need));
    if (guard_run(plan.slots, p, +1) < need)
      fail("pilot " + std::to_string(b) + " trailing guard < " +
           std::to_string(need));
  }

  if (plan.direction == AfdmaPlan::Direction::downlink) {
    for (size_t u = 0; u < plan.data_blocks.size(); ++u) {
      const SlotRange& d = plan.data_blocks[u];
      if (d.size() <= 0) continue;
      const int need = plan.users[u].L;
      if (guard_run(plan.slots, d.first, -1) < need)
        fail("user " + std::to_string(u) + " leading guard < " +
             std::to_string(need));
      if (guard_run(plan.slots, d.last, +1) < need)
        fail("user " + std::to_string(u) + " trailing guard < " +
             std::to_string(need));
    }
    const long long expect =
        afdma_downlink_overhead(plan.n_bs, plan.L_max_plan, plan.users);
    // Padding can only add guards, never shrink the overhead.
    if (plan.overhead_slots() < expect)
      fail("overhead below the closed-form minimum");
  }
  return check;
}

}  // namespace afdm
