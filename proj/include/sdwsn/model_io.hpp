#pragma once

#include <string>

#include "sdwsn/sdt.hpp"

namespace sdwsn {

/// Fitted models persist as a directory: meta.txt carries the partition and
/// variant, T_<j>.txt / S0_<j>.txt / S1_<j>.txt / S2_<j>.txt the matrices.
void save_model(const std::string& dir, const NetworkModel& model);
NetworkModel load_model(const std::string& dir);

}  // namespace sdwsn
