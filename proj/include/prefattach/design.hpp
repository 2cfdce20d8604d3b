#pragma once

#include "prefattach/rng.hpp"
#include "prefattach/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace prefattach {

enum class DesignKind {
    StrPipsChao,
    DrawByDraw,
    ConditionalPoisson,
    OrderedSystematic,
    RandomSystematic,
};

// How the ordered systematic array is arranged and grown.
enum class OrderPolicy {
    DegreeDescending,  // re-sorted each step by (degree desc, id asc)
    AgeOrder,          // newborns appended on the right
    RomanticCycle,     // newborns inserted left, right, middle, middle (m = 2)
};

// Everything that determines a generator run.
struct DesignSpec {
    DesignKind kind = DesignKind::StrPipsChao;
    std::optional<OrderPolicy> order;  // present iff kind == OrderedSystematic
    bool circular = false;
    std::uint64_t seed = kDefaultSeed;

    SystematicMode systematic_mode() const noexcept {
        return circular ? SystematicMode::Circular : SystematicMode::Linear;
    }

    // Throws std::invalid_argument when the spec is inconsistent or does not
    // support sample size m.
    void validate(std::size_t m) const;

    static DesignSpec chao(std::uint64_t seed = kDefaultSeed);
    static DesignSpec draw_by_draw(std::uint64_t seed = kDefaultSeed);
    static DesignSpec conditional_poisson(std::uint64_t seed = kDefaultSeed);
    static DesignSpec ordered_systematic(OrderPolicy order, std::uint64_t seed = kDefaultSeed);
    static DesignSpec random_systematic(std::uint64_t seed = kDefaultSeed);
};

// CLI spellings: chao, dbd, cp, ordered-systematic, random-systematic.
std::string_view to_string(DesignKind kind) noexcept;
DesignKind parse_design_kind(std::string_view text);

// CLI spellings: degree, age, romantic.
std::string_view to_string(OrderPolicy order) noexcept;
OrderPolicy parse_order_policy(std::string_view text);

}  // namespace prefattach
