#ifndef HAPT_ACTIVITY_HPP
#define HAPT_ACTIVITY_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hapt {

inline constexpr int kNumActivities = 12;

// Indexed by id - 1, as listed in activity_labels.txt.
inline constexpr std::array<std::string_view, kNumActivities> kActivityNames = {
    "WALKING",      "WALKING_UPSTAIRS", "WALKING_DOWNSTAIRS", "SITTING",
    "STANDING",     "LAYING",           "STAND_TO_SIT",       "SIT_TO_STAND",
    "SIT_TO_LIE",   "LIE_TO_SIT",       "STAND_TO_LIE",       "LIE_TO_STAND",
};

// Row/column order used by confusion-matrix reports (postures first, then
// the three walking classes). Values are activity ids.
inline constexpr std::array<int, kNumActivities> kReportOrder = {5, 7, 4, 8, 11, 6, 10, 9, 12, 1, 3, 2};

/// One of the twelve activities. Internally classes are addressed by
/// index() = id - 1.
class ActivityLabel {
public:
    constexpr explicit ActivityLabel(int id) : id_(id) {
        if (id < 1 || id > kNumActivities)
            throw std::out_of_range("activity id outside 1..12: " + std::to_string(id));
    }

    static constexpr ActivityLabel from_index(int index) { return ActivityLabel(index + 1); }

    static std::optional<ActivityLabel> from_name(std::string_view name) {
        for (int i = 0; i < kNumActivities; ++i)
            if (kActivityNames[i] == name) return ActivityLabel(i + 1);
        return std::nullopt;
    }

    constexpr int id() const { return id_; }
    constexpr int index() const { return id_ - 1; }
    constexpr std::string_view name() const { return kActivityNames[id_ - 1]; }

    friend constexpr bool operator==(ActivityLabel, ActivityLabel) = default;

private:
    int id_;
};

/// Display name for a class index; synthetic datasets with more classes
/// than the activity table fall back to "CLASS_<id>".
inline std::string class_name(int index) {
    if (index >= 0 && index < kNumActivities) return std::string(kActivityNames[index]);
    return "CLASS_" + std::to_string(index + 1);
}

} // namespace hapt

#endif // HAPT_ACTIVITY_HPP
