#include "persona/personality.hpp"

#include <cctype>

#include "persona/errors.hpp"

namespace persona {

namespace {

// Index layout: bit 3 = I, bit 2 = N, bit 1 = F, bit 0 = P.
constexpr std::array<const char*, 16> kCodes = {
    "ESTJ", "ESTP", "ESFJ", "ESFP", "ENTJ", "ENTP", "ENFJ", "ENFP",
    "ISTJ", "ISTP", "ISFJ", "ISFP", "INTJ", "INTP", "INFJ", "INFP"};

}  // namespace

char axis_side_letter(AxisSide side) {
  static constexpr char kLetters[8] = {'E', 'I', 'S', 'N', 'T', 'F', 'J', 'P'};
  return kLetters[static_cast<std::uint8_t>(side)];
}

std::string_view role_group_name(RoleGroup g) {
  switch (g) {
    case RoleGroup::Analyst:
      return "Analyst";
    case RoleGroup::Diplomat:
      return "Diplomat";
    case RoleGroup::Sentinel:
      return "Sentinel";
    case RoleGroup::Explorer:
      return "Explorer";
  }
  return "";
}

PersonalityLabel PersonalityLabel::parse(std::string_view code) {
  if (code.size() != 4) throw InvalidCode("not a 4-letter personality code: \"" + std::string(code) + "\"");
  char up[4];
  for (int i = 0; i < 4; ++i) up[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(code[i])));
  std::uint8_t idx = 0;
  if (up[0] == 'I')
    idx |= 8;
  else if (up[0] != 'E')
    throw InvalidCode("invalid personality code: \"" + std::string(code) + "\"");
  if (up[1] == 'N')
    idx |= 4;
  else if (up[1] != 'S')
    throw InvalidCode("invalid personality code: \"" + std::string(code) + "\"");
  if (up[2] == 'F')
    idx |= 2;
  else if (up[2] != 'T')
    throw InvalidCode("invalid personality code: \"" + std::string(code) + "\"");
  if (up[3] == 'P')
    idx |= 1;
  else if (up[3] != 'J')
    throw InvalidCode("invalid personality code: \"" + std::string(code) + "\"");
  return PersonalityLabel(idx);
}

PersonalityLabel PersonalityLabel::from_index(std::uint8_t idx) {
  return PersonalityLabel(static_cast<std::uint8_t>(idx & 0x0F));
}

const std::array<PersonalityLabel, 16>& PersonalityLabel::all() {
  static const std::array<PersonalityLabel, 16> labels = [] {
    std::array<PersonalityLabel, 16> out{
        PersonalityLabel(0),  PersonalityLabel(1),  PersonalityLabel(2),  PersonalityLabel(3),
        PersonalityLabel(4),  PersonalityLabel(5),  PersonalityLabel(6),  PersonalityLabel(7),
        PersonalityLabel(8),  PersonalityLabel(9),  PersonalityLabel(10), PersonalityLabel(11),
        PersonalityLabel(12), PersonalityLabel(13), PersonalityLabel(14), PersonalityLabel(15)};
    return out;
  }();
  return labels;
}

std::string_view PersonalityLabel::code() const { return kCodes[index_]; }

Attitude PersonalityLabel::attitude() const {
  return (index_ & 8) ? Attitude::Introversion : Attitude::Extraversion;
}

Perception PersonalityLabel::perception() const {
  return (index_ & 4) ? Perception::Intuition : Perception::Sensing;
}

Judgment PersonalityLabel::judgment() const {
  return (index_ & 2) ? Judgment::Feeling : Judgment::Thinking;
}

Lifestyle PersonalityLabel::lifestyle() const {
  return (index_ & 1) ? Lifestyle::Perceiving : Lifestyle::Judging;
}

RoleGroup PersonalityLabel::role_group() const {
  if (perception() == Perception::Intuition)
    return judgment() == Judgment::Thinking ? RoleGroup::Analyst : RoleGroup::Diplomat;
  return lifestyle() == Lifestyle::Judging ? RoleGroup::Sentinel : RoleGroup::Explorer;
}

bool PersonalityLabel::has_side(AxisSide side) const {
  switch (side) {
    case AxisSide::E:
      return attitude() == Attitude::Extraversion;
    case AxisSide::I:
      return attitude() == Attitude::Introversion;
    case AxisSide::S:
      return perception() == Perception::Sensing;
    case AxisSide::N:
      return perception() == Perception::Intuition;
    case AxisSide::T:
      return judgment() == Judgment::Thinking;
    case AxisSide::F:
      return judgment() == Judgment::Feeling;
    case AxisSide::J:
      return lifestyle() == Lifestyle::Judging;
    case AxisSide::P:
      return lifestyle() == Lifestyle::Perceiving;
  }
  return false;
}

}  // namespace persona
