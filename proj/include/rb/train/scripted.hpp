#ifndef RB_TRAIN_SCRIPTED_HPP_
#define RB_TRAIN_SCRIPTED_HPP_

#include "rb/env/pomg.hpp"

namespace rb::train {

// The scripted players the Tiger experiments are run against. P1 listens
// until the tiger growls, then opens the other door. A close P2 mirrors P1's
// known action class; a far P2 never commits.

class ScriptedTigerP1 {
 public:
  void reset() { known_door_ = -1; }
  int act(const env::Observation& obs) {
    if (obs.growl == 1) known_door_ = 0;
    if (obs.growl == 2) known_door_ = 1;
    if (known_door_ == 0) return env::tiger::kOpenRight;
    if (known_door_ == 1) return env::tiger::kOpenLeft;
    return env::tiger::kListen;
  }

 private:
  int known_door_ = -1;  // -1 unknown, 0 left, 1 right
};

class ScriptedTigerP2V2 {
 public:
  void reset() { heard_ = false; }
  int act(const env::Observation& obs) {
    if (obs.proximity == 1) return env::tiger::kWait;
    if (obs.growl != 0) heard_ = true;
    return heard_ ? env::tiger::kCommitDoor : env::tiger::kCommitListen;
  }

 private:
  bool heard_ = false;
};

// Optimal predictors, used as evaluation yardsticks.
class ScriptedTigerP2V1 {
 public:
  void reset() { heard_ = false; }
  int act(const env::Observation& obs) {
    if (obs.growl != 0) heard_ = true;
    return heard_ ? env::tiger::kPredictOpen : env::tiger::kPredictListen;
  }

 private:
  bool heard_ = false;
};

class ScriptedTigerP3 {
 public:
  void reset() {}
  int act(const env::Observation& obs) const {
    return obs.proximity == 0 ? env::tiger::kPredictCommit
                              : env::tiger::kPredictWait;
  }
};

}  // namespace rb::train

#endif  // RB_TRAIN_SCRIPTED_HPP_
