#pragma once

// Model constants, states and actions of the energy-harvesting transmitter
// operating over a two-state (GOOD/BAD) Markov channel, plus the reward and
// battery kernels every other component is built on.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ehsense {

/// Raised when a parameter set or an input violates a model invariant.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an action is applied at a battery level that cannot afford it.
class InfeasibleAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Action codes are a fixed contract for exported region files.
enum class Action : std::uint8_t {
  Defer = 0,          // D
  LowRate = 1,        // L
  SenseDefer = 2,     // OD (written O when r_low == 0)
  SenseTransmit = 3,  // OT
  HighRate = 4,       // H
};

inline constexpr int kNumActions = 5;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::Defer, Action::LowRate, Action::SenseDefer, Action::SenseTransmit,
    Action::HighRate};

constexpr int action_code(Action a) { return static_cast<int>(a); }
std::string_view action_label(Action a);
/// Accepts D, L, OD, O, OT, H.
Action parse_action(std::string_view label);

/// Small bit set over the five actions.
class ActionSet {
 public:
  constexpr ActionSet() = default;
  constexpr ActionSet(std::initializer_list<Action> actions) {
    for (Action a : actions) insert(a);
  }
  static constexpr ActionSet all() {
    return {Action::Defer, Action::LowRate, Action::SenseDefer,
            Action::SenseTransmit, Action::HighRate};
  }

  constexpr void insert(Action a) { bits_ |= bit(a); }
  constexpr void erase(Action a) { bits_ &= static_cast<std::uint8_t>(~bit(a)); }
  constexpr bool contains(Action a) const { return (bits_ & bit(a)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    int n = 0;
    for (Action a : kAllActions) n += contains(a) ? 1 : 0;
    return n;
  }
  constexpr ActionSet operator&(ActionSet o) const {
    ActionSet r;
    r.bits_ = bits_ & o.bits_;
    return r;
  }
  constexpr bool operator==(const ActionSet&) const = default;

 private:
  static constexpr std::uint8_t bit(Action a) {
    return static_cast<std::uint8_t>(1u << action_code(a));
  }
  std::uint8_t bits_ = 0;
};

enum class ChannelObservation : std::uint8_t {
  None = 0,
  AckHigh,
  NackHigh,
  SensedGood,
  SensedBad,
};

std::string_view observation_label(ChannelObservation o);

/// All model constants. Energies are integer quanta; the sensing fraction is
/// always derived as e_sense / e_tx.
struct SystemParams {
  double lambda0 = 0.0;  // Pr[GOOD | previous BAD]
  double lambda1 = 0.0;  // Pr[GOOD | previous GOOD]
  std::vector<double> energy_pmf;  // Pr[harvest = m], m = 0..M-1
  int b_max = 0;
  int e_tx = 0;
  int e_sense = 0;
  double r_low = 0.0;
  double r_high = 0.0;
  double beta = 0.0;

  /// Throws ModelError naming the first violated invariant.
  void validate() const;

  double tau() const { return static_cast<double>(e_sense) / e_tx; }
  /// Energy kept in the battery when sensing finds the channel BAD.
  int e_saved() const { return e_tx - e_sense; }
  int num_harvest_levels() const { return static_cast<int>(energy_pmf.size()); }
  /// r_low == 0: the low-rate and sense-transmit actions are unavailable.
  bool single_rate() const { return r_low == 0.0; }
};

/// pmf with mass q on `amount` and 1 - q on zero.
std::vector<double> two_point_pmf(int amount, double q);

struct SystemState {
  int battery = 0;
  double belief = 0.0;  // Pr[channel GOOD | history]
};

/// Nonzero harvest atoms, in increasing amount.
struct HarvestAtom {
  int amount;
  double prob;
};
std::vector<HarvestAtom> harvest_support(const SystemParams& params);

bool is_feasible(Action a, int battery, const SystemParams& params);
ActionSet feasible_actions(int battery, const SystemParams& params);

/// Expected bits for one slot; zero for D and for infeasible actions.
double expected_reward(const SystemState& state, Action a, const SystemParams& params);

/// Bits actually delivered in a slot whose channel state is known.
double slot_bits(Action a, int battery, bool channel_good, const SystemParams& params);

/// Energy drawn from the battery within the slot, before the harvest credit.
int energy_spent(Action a, int battery, bool channel_good, const SystemParams& params);

/// Battery at the start of the next slot. Throws InfeasibleAction.
int next_battery(int battery, int harvest, Action a, bool channel_good,
                 const SystemParams& params);

/// What the transmitter learns about the channel after acting.
ChannelObservation observe(Action a, bool channel_good);

}  // namespace ehsense
