#include "ib/symbol.hpp"

namespace ib {

Symbol::Symbol() : d_(std::make_shared<const Data>(Data{"", Parity::Even, 0})) {}

Symbol::Symbol(std::string name, Parity parity, int64_t rank)
    : d_(std::make_shared<const Data>(Data{std::move(name), parity, rank})) {}

}  // namespace ib
