#include "mta/group.hpp"

#include <stdexcept>

namespace mta {

std::string group_tag_name(GroupTag tag) {
  switch (tag) {
    case GroupTag::kGL: return "gl";
    case GroupTag::kU: return "u";
    case GroupTag::kSL: return "sl";
    case GroupTag::kSLk: return "slk";
    case GroupTag::kMonomial: return "monomial";
    case GroupTag::kO: return "o";
    case GroupTag::kSO: return "so";
    case GroupTag::kSymmetric: return "sn";
    case GroupTag::kSigned: return "sn_pm";
    case GroupTag::kAlternating: return "an";
    case GroupTag::kSignedAlternating: return "an_pm";
    case GroupTag::kSp: return "sp";
  }
  throw std::logic_error("unhandled group tag");
}

std::string GroupSpec::name() const {
  if (tag == GroupTag::kSLk) return "slk:" + std::to_string(k_param);
  return group_tag_name(tag);
}

void GroupSpec::validate() const {
  if (n < 1) throw std::invalid_argument("group dimension must be >= 1");
  if (tag == GroupTag::kSp && n % 2 != 0) {
    throw std::invalid_argument("sp requires even dimension");
  }
  if (tag == GroupTag::kSLk && k_param < 1) {
    throw std::invalid_argument("slk parameter must be >= 1");
  }
}

GroupSpec parse_group_name(const std::string& text, int n) {
  GroupSpec spec;
  spec.n = n;
  std::string base = text;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    base = text.substr(0, colon);
    spec.k_param = std::stoi(text.substr(colon + 1));
  }
  bool found = false;
  for (GroupTag tag : all_group_tags()) {
    if (group_tag_name(tag) == base) {
      spec.tag = tag;
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("unknown group name: " + text);
  spec.validate();
  return spec;
}

bool is_permutation_family(GroupTag tag) {
  switch (tag) {
    case GroupTag::kSymmetric:
    case GroupTag::kSigned:
    case GroupTag::kAlternating:
    case GroupTag::kSignedAlternating:
      return true;
    default:
      return false;
  }
}

bool is_lie_family(GroupTag tag) {
  return !is_permutation_family(tag);
}

std::vector<GroupTag> all_group_tags() {
  return {GroupTag::kGL,        GroupTag::kU,
          GroupTag::kSL,        GroupTag::kSLk,
          GroupTag::kMonomial,  GroupTag::kO,
          GroupTag::kSO,        GroupTag::kSymmetric,
          GroupTag::kSigned,    GroupTag::kAlternating,
          GroupTag::kSignedAlternating, GroupTag::kSp};
}

}  // namespace mta
