#pragma once

namespace finharm::detail {

// 128-bit products keep exact phase arithmetic free of overflow for any group
// whose order fits in 62 bits.
__extension__ typedef __int128 int128;

}  // namespace finharm::detail
