// A short walk through the library: build F_16 over F_2, list its hyperplanes,
// compute the clique number of each G_U and compare with the prediction.

#include <cstdio>

#include "paleyvec/sweep.hpp"

using namespace paleyvec;

int main() {
  const auto f = FieldCtx::build(2, 1, 4);
  std::printf("field %s, generator %s\n", f.spec_string().c_str(), f.to_string(f.generator()).c_str());
  OmegaEngine eng;
  for (const auto& h : all_hyperplanes(f)) {
    const auto G = GraphGU::build(f, h.space);
    const auto r = eng.solve(G);
    const auto pred = predict_omega(f, h.space);
    const auto dec = decompose_clique(G, r.witness);
    std::printf("delta=%-3u %-20s omega=%llu predicted=%s t=%u r=%u\n", h.delta.idx, h.space.to_string().c_str(),
                static_cast<unsigned long long>(r.size), pred.to_string().c_str(), static_cast<unsigned>(dec.t),
                static_cast<unsigned>(dec.r));
  }
  std::printf("omega_{2,4} = %llu\n", static_cast<unsigned long long>(omega_qn(2, 4)));
}
