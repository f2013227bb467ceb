#pragma once

namespace qmg {

// Serial is the reference path; Parallel must reproduce it bit for bit.
enum class Exec { Serial, Parallel };

}  // namespace qmg
