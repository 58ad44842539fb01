#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace persona {

// The four MBTI axes. Each label takes one side per axis.
enum class Attitude : std::uint8_t { Extraversion, Introversion };
enum class Perception : std::uint8_t { Sensing, Intuition };
enum class Judgment : std::uint8_t { Thinking, Feeling };
enum class Lifestyle : std::uint8_t { Judging, Perceiving };

enum class RoleGroup : std::uint8_t { Analyst, Diplomat, Sentinel, Explorer };

// One side of one axis: E, I, S, N, T, F, J, P (in this order).
enum class AxisSide : std::uint8_t { E, I, S, N, T, F, J, P };

inline constexpr std::array<AxisSide, 8> kAllAxisSides = {
    AxisSide::E, AxisSide::I, AxisSide::S, AxisSide::N,
    AxisSide::T, AxisSide::F, AxisSide::J, AxisSide::P};

char axis_side_letter(AxisSide side);
std::string_view role_group_name(RoleGroup g);

// One of the 16 MBTI codes, stored as a dense index. The code string, the
// four axis values and the role group are all pure functions of the index.
class PersonalityLabel {
 public:
  // Accepts any case ("estj" -> ESTJ); throws InvalidCode otherwise.
  static PersonalityLabel parse(std::string_view code);

  static PersonalityLabel from_index(std::uint8_t idx);

  static const std::array<PersonalityLabel, 16>& all();

  std::string_view code() const;
  std::uint8_t index() const { return index_; }

  Attitude attitude() const;
  Perception perception() const;
  Judgment judgment() const;
  Lifestyle lifestyle() const;
  RoleGroup role_group() const;

  bool has_side(AxisSide side) const;

  auto operator<=>(const PersonalityLabel&) const = default;

 private:
  explicit PersonalityLabel(std::uint8_t idx) : index_(idx) {}
  std::uint8_t index_;
};

}  // namespace persona
