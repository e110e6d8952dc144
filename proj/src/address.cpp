#include "mstree/address.hpp"

#include <algorithm>
#include <charconv>

#include "mstree/errors.hpp"

namespace mstree {

NodeAddress::NodeAddress(std::vector<int> digits) : digits_(std::move(digits)) {
  for (int d : digits_) {
    if (d < 1) throw DomainError("node address labels are 1-based");
  }
}

NodeAddress NodeAddress::parse(std::string_view text) {
  std::vector<int> digits;
  if (text.find('.') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('.', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view part = text.substr(pos, end - pos);
      int value = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
      if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
        throw ConfigError("malformed node address '" + std::string(text) + "'");
      }
      digits.push_back(value);
      pos = end + 1;
    }
  } else {
    for (char ch : text) {
      if (ch < '0' || ch > '9') {
        throw ConfigError("malformed node address '" + std::string(text) + "'");
      }
      digits.push_back(ch - '0');
    }
  }
  if (std::any_of(digits.begin(), digits.end(), [](int d) { return d < 1; })) {
    throw ConfigError("node address labels are 1-based: '" + std::string(text) + "'");
  }
  return NodeAddress(std::move(digits));
}

NodeAddress NodeAddress::parent() const {
  if (digits_.empty()) throw DomainError("the root has no parent");
  return NodeAddress(std::vector<int>(digits_.begin(), digits_.end() - 1));
}

NodeAddress NodeAddress::child(int label) const {
  auto digits = digits_;
  digits.push_back(label);
  return NodeAddress(std::move(digits));
}

bool NodeAddress::is_prefix_of(const NodeAddress& other) const {
  return digits_.size() <= other.digits_.size() &&
         std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

std::string NodeAddress::to_string() const {
  const bool wide = std::any_of(digits_.begin(), digits_.end(), [](int d) { return d > 9; });
  std::string out;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (wide && i > 0) out += '.';
    out += std::to_string(digits_[i]);
  }
  return out;
}

}  // namespace mstree
