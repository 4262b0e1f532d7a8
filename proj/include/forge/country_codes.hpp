#pragma once

#include <string_view>

namespace forge {

// ISO 3166-1 alpha-3 membership test.
bool is_iso3_country(std::string_view code);

} // namespace forge
