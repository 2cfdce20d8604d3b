#include "prefattach/generator.hpp"

#include <stdexcept>

namespace prefattach {

void GrowthParams::validate() const {
    if (m == 0) {
        throw std::invalid_argument("m must be at least 1");
    }
    if (n < m) {
        throw std::invalid_argument("n must be at least m");
    }
}

namespace {

const GrowthParams& checked(const GrowthParams& params) {
    params.validate();
    return params;
}

}  // namespace

GrowthProcess::GrowthProcess(const GrowthParams& params, const DesignSpec& design, Rng rng)
    : params_(checked(params)), sampler_(design, params.m), rng_(std::move(rng)) {
    graph_ = complete_graph(params_.m);
    sampler_.reset(graph_.degrees());
    targets_.reserve(params_.m);
}

std::vector<VertexId> GrowthProcess::step() {
    if (done()) {
        throw std::logic_error("growth already reached n vertices");
    }
    sampler_.draw(graph_.degrees(), rng_, targets_);
    graph_.add_newborn(targets_);
    sampler_.commit(graph_.degrees(), targets_);
    return targets_;
}

void GrowthProcess::run() {
    while (!done()) {
        sampler_.draw(graph_.degrees(), rng_, targets_);
        graph_.add_newborn(targets_);
        sampler_.commit(graph_.degrees(), targets_);
    }
}

Graph generate(const GrowthParams& params, const DesignSpec& design) {
    GrowthProcess process(params, design, make_stream(design.seed, 0));
    process.run();
    return process.graph();
}

Sample attachment_step(const Graph& g, std::size_t m, AttachmentSampler& sampler, Rng& rng) {
    if (g.vertex_count() < m) {
        throw std::invalid_argument("graph has fewer than m vertices");
    }
    std::vector<VertexId> out;
    sampler.draw(g.degrees(), rng, out);
    return Sample(std::vector<std::size_t>(out.begin(), out.end()));
}

}  // namespace prefattach
