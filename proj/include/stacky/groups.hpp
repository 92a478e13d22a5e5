#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace stacky {

using Element = std::uint32_t;

/// A finite group given by its multiplication table. Element 0 is the
/// identity. Copies share the (immutable) table.
class FiniteGroup {
public:
  /// Trivial group.
  FiniteGroup();

  /// Validates closure, identity at index 0, inverses and associativity;
  /// throws Error(Validation) otherwise.
  static FiniteGroup from_table(std::vector<std::vector<Element>> table,
                                std::vector<std::string> labels = {});

  std::size_t order() const noexcept { return impl_->order; }
  Element identity() const noexcept { return 0; }
  Element mul(Element a, Element b) const noexcept { return impl_->table[a * impl_->order + b]; }
  Element inverse(Element a) const noexcept { return impl_->inverse[a]; }
  std::size_t element_order(Element a) const;
  bool is_abelian() const noexcept { return impl_->abelian; }

  /// Row-major flat table.
  const std::vector<Element>& table() const noexcept { return impl_->table; }
  std::uint64_t table_hash() const noexcept { return impl_->hash; }
  std::string label(Element a) const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) noexcept {
    return a.impl_ == b.impl_ || a.impl_->table == b.impl_->table;
  }

private:
  struct Impl {
    std::size_t order = 1;
    std::vector<Element> table{0};
    std::vector<Element> inverse{0};
    std::vector<std::string> labels;
    std::uint64_t hash = 0;
    bool abelian = true;
  };
  std::shared_ptr<const Impl> impl_;
};

/// A homomorphism given by the images of all elements (validated).
class GroupHom {
public:
  GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Element> image);

  static GroupHom identity(const FiniteGroup& g);

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  const std::vector<Element>& image() const noexcept { return image_; }
  Element operator()(Element g) const noexcept { return image_[g]; }

  bool is_injective() const;
  bool is_surjective() const;

private:
  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<Element> image_;
};

/// g o f.
GroupHom compose(const GroupHom& g, const GroupHom& f);

FiniteGroup cyclic(std::size_t n);

/// G x H with element (g, h) at index g*|H| + h.
struct DirectProduct {
  FiniteGroup group;
  GroupHom first_projection;
  GroupHom second_projection;
  GroupHom first_inclusion;
  GroupHom second_inclusion;
};
DirectProduct direct_product(const FiniteGroup& g, const FiniteGroup& h);

/// Z/n x| Z/2 with the generator of Z/2 acting by t -> a t; element (t, s)
/// at index s*n + t. Requires a^2 = 1 mod n and 1 <= a <= n.
FiniteGroup semidirect_cyclic_by_z2(std::size_t n, std::size_t a);

/// The quaternion group {+-1, +-i, +-j, +-k}.
FiniteGroup quaternion8();

/// A normalized 2-cocycle G x G -> Z/r (validated).
class Cocycle2 {
public:
  Cocycle2(FiniteGroup base, std::int64_t modulus, std::vector<std::int64_t> values);

  static Cocycle2 zero(const FiniteGroup& base, std::int64_t modulus);

  const FiniteGroup& base() const noexcept { return base_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  std::int64_t operator()(Element g, Element h) const noexcept {
    return values_[g * base_.order() + h];
  }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  bool is_zero() const noexcept;

  friend bool operator==(const Cocycle2&, const Cocycle2&) = default;

private:
  FiniteGroup base_;
  std::int64_t modulus_;
  std::vector<std::int64_t> values_;
};

/// 0 -> Z/r -> E -> G -> 1 with E built from the cocycle; element (g, t)
/// at index g*r + t.
class CentralExtension {
public:
  explicit CentralExtension(Cocycle2 cocycle);

  const Cocycle2& cocycle() const noexcept { return cocycle_; }
  const FiniteGroup& base() const noexcept { return cocycle_.base(); }
  std::int64_t modulus() const noexcept { return cocycle_.modulus(); }
  const FiniteGroup& total() const noexcept { return total_; }
  const GroupHom& projection() const noexcept { return projection_; }
  const GroupHom& kernel_embedding() const noexcept { return kernel_embedding_; }

private:
  Cocycle2 cocycle_;
  FiniteGroup total_;
  GroupHom projection_;
  GroupHom kernel_embedding_;
};

CentralExtension central_extension(const Cocycle2& c);

/// Some element has order |G|.
bool is_cyclic(const FiniteGroup& g);

/// Brute-force isomorphism test, groups of order at most 16.
bool are_isomorphic_small(const FiniteGroup& a, const FiniteGroup& b);

// Text formats: "order n" followed by n rows; "modulus r" followed by |G|
// rows of residues. '#' starts a comment.
FiniteGroup parse_group_table(std::string_view text, const std::string& origin = "<table>");
FiniteGroup read_group_table(const std::filesystem::path& path);
std::string format_group_table(const FiniteGroup& g);
Cocycle2 parse_cocycle(std::string_view text, const FiniteGroup& base,
                       const std::string& origin = "<cocycle>");
Cocycle2 read_cocycle(const std::filesystem::path& path, const FiniteGroup& base);
std::string format_cocycle(const Cocycle2& c);

} // namespace stacky
