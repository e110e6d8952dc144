#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace mstree {

/// Path from the root to a node as 1-based child labels. The empty path is
/// the root; the number of labels is the node's scale.
class NodeAddress {
 public:
  NodeAddress() = default;
  explicit NodeAddress(std::vector<int> digits);

  /// Parses "121" or, when any label exceeds 9, a dot-joined form "1.12.3".
  /// The empty string is the root.
  static NodeAddress parse(std::string_view text);

  const std::vector<int>& digits() const { return digits_; }
  int scale() const { return static_cast<int>(digits_.size()); }
  bool is_root() const { return digits_.empty(); }

  NodeAddress parent() const;
  NodeAddress child(int label) const;
  bool is_prefix_of(const NodeAddress& other) const;

  std::string to_string() const;

  friend auto operator<=>(const NodeAddress&, const NodeAddress&) = default;

 private:
  std::vector<int> digits_;
};

}  // namespace mstree
