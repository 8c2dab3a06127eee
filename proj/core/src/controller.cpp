#include "distvrft/controller.hpp"

namespace distvrft {

RationalTF ControllerNode::w(std::size_t j) const {
    auto it = coupling_w.find(j);
    return it == coupling_w.end() ? RationalTF::zero() : it->second;
}

RationalTF ControllerNode::q(std::size_t j) const {
    auto it = coupling_q.find(j);
    return it == coupling_q.end() ? RationalTF::zero() : it->second;
}

}  // namespace distvrft
