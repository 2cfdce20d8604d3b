#include "prefattach/design.hpp"

#include <stdexcept>

namespace prefattach {

void DesignSpec::validate(std::size_t m) const {
    if (m == 0) {
        throw std::invalid_argument("m must be at least 1");
    }
    if (kind == DesignKind::OrderedSystematic) {
        if (!order) {
            throw std::invalid_argument("ordered-systematic needs an order policy");
        }
        if (*order == OrderPolicy::RomanticCycle && m != 2) {
            throw std::invalid_argument("the romantic order policy requires m = 2");
        }
    } else if (order) {
        throw std::invalid_argument("an order policy only applies to ordered-systematic");
    }
    if (circular && kind != DesignKind::OrderedSystematic && kind != DesignKind::RandomSystematic) {
        throw std::invalid_argument("circular traversal only applies to systematic designs");
    }
}

DesignSpec DesignSpec::chao(std::uint64_t seed) {
    return {DesignKind::StrPipsChao, std::nullopt, false, seed};
}

DesignSpec DesignSpec::draw_by_draw(std::uint64_t seed) {
    return {DesignKind::DrawByDraw, std::nullopt, false, seed};
}

DesignSpec DesignSpec::conditional_poisson(std::uint64_t seed) {
    return {DesignKind::ConditionalPoisson, std::nullopt, false, seed};
}

DesignSpec DesignSpec::ordered_systematic(OrderPolicy order, std::uint64_t seed) {
    return {DesignKind::OrderedSystematic, order, false, seed};
}

DesignSpec DesignSpec::random_systematic(std::uint64_t seed) {
    return {DesignKind::RandomSystematic, std::nullopt, false, seed};
}

std::string_view to_string(DesignKind kind) noexcept {
    switch (kind) {
        case DesignKind::StrPipsChao: return "chao";
        case DesignKind::DrawByDraw: return "dbd";
        case DesignKind::ConditionalPoisson: return "cp";
        case DesignKind::OrderedSystematic: return "ordered-systematic";
        case DesignKind::RandomSystematic: return "random-systematic";
    }
    return "unknown";
}

DesignKind parse_design_kind(std::string_view text) {
    for (auto kind : {DesignKind::StrPipsChao, DesignKind::DrawByDraw, DesignKind::ConditionalPoisson,
                      DesignKind::OrderedSystematic, DesignKind::RandomSystematic}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown design '" + std::string(text) + "'");
}

std::string_view to_string(OrderPolicy order) noexcept {
    switch (order) {
        case OrderPolicy::DegreeDescending: return "degree";
        case OrderPolicy::AgeOrder: return "age";
        case OrderPolicy::RomanticCycle: return "romantic";
    }
    return "unknown";
}

OrderPolicy parse_order_policy(std::string_view text) {
    for (auto order : {OrderPolicy::DegreeDescending, OrderPolicy::AgeOrder, OrderPolicy::RomanticCycle}) {
        if (text == to_string(order)) {
            return order;
        }
    }
    throw std::invalid_argument("unknown order policy '" + std::string(text) + "'");
}

}  // namespace prefattach
