#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace ib {

enum class Parity : uint8_t { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
inline bool is_odd(Parity p) { return p == Parity::Odd; }
inline const char* to_string(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

// Named generator. Symbols are totally ordered by (rank, name); the rank lets
// a SystemSpec fix declaration order, which in turn fixes odd-product signs.
class Symbol {
 public:
  Symbol();
  explicit Symbol(std::string name, Parity parity = Parity::Even, int64_t rank = 0);

  const std::string& name() const { return d_->name; }
  Parity parity() const { return d_->parity; }
  bool odd() const { return d_->parity == Parity::Odd; }
  int64_t rank() const { return d_->rank; }

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.d_ == b.d_ || (a.d_->rank == b.d_->rank && a.d_->name == b.d_->name);
  }
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    if (a.d_ == b.d_) return std::strong_ordering::equal;
    if (auto c = a.d_->rank <=> b.d_->rank; c != 0) return c;
    return a.d_->name.compare(b.d_->name) <=> 0;
  }

 private:
  struct Data {
    std::string name;
    Parity parity;
    int64_t rank;
  };
  std::shared_ptr<const Data> d_;
};

}  // namespace ib

template <>
struct std::hash<ib::Symbol> {
  size_t operator()(const ib::Symbol& s) const noexcept { return std::hash<std::string>()(s.name()); }
};
