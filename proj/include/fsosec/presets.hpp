#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace fsosec::cli
{

//! Names of the built-in figure presets, in figure order.
const std::vector<std::string_view>& preset_names();

//! Document text of a built-in preset; nullopt for an unknown name.
std::optional<std::string_view> preset_text(std::string_view name);

}  // namespace fsosec::cli
