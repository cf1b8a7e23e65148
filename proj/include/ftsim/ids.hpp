#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace ftsim {

// Integer identifier tagged by the entity it names, so task and device ids
// cannot be mixed up.
template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Id, Id) = default;
    friend constexpr bool operator==(Id, Id) = default;

    std::string str() const { return std::to_string(value); }
};

struct TaskTag {};
struct DeviceTag {};

using TaskId = Id<TaskTag>;
using DeviceId = Id<DeviceTag>;

} // namespace ftsim

template <class Tag>
struct std::hash<ftsim::Id<Tag>> {
    std::size_t operator()(ftsim::Id<Tag> id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
