#pragma once

#include <cstdint>
#include <string_view>

namespace momentplan {

/// Seed for the index-th draw of a named stream under a command-level root
/// seed. Pure function of its arguments: streams are independent of one
/// another and of how many draws other streams made.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

}  // namespace momentplan
