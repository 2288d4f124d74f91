#pragma once

#include "beatsim/model.hpp"

namespace beatsim {

/// A photon registered in a physical channel. `time` is the detection time
/// at the detector radius; the emission time is time - r/c.
struct DetectionEvent {
  Channel channel = Channel::L1;
  double time = 0.0;

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

}  // namespace beatsim
