#pragma once

#include <cstdint>
#include <string>

namespace newsrank {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerSlice = 30 * 60;
constexpr std::int64_t kTwoDays = 2 * 24 * 3600;
constexpr int kFinalSlice = 96;  // 2 days of 30-minute slices

// Strict "YYYY-MM-DDTHH:MM:SSZ". Throws ValidationError on anything else.
Timestamp parse_iso8601(const std::string& s);
std::string format_iso8601(Timestamp t);

// 1-based 30-minute slice index of an item published at `pub` seen at `ref`.
// Anything within the first half hour (including ref == pub) is slice 1.
// Not capped here; decay() caps at t_f.
int slice_index(Timestamp pub, Timestamp ref);

}  // namespace newsrank
