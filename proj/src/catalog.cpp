#include "eaforge/catalog.hpp"

#include "eaforge/finite_field.hpp"
#include "eaforge/function_file.hpp"

namespace eaforge {

namespace {

constexpr const char* kBanff = R"(
U 6 5B 1:3
U 6 5B 1:3,a^11:6,a:9
U 6 5B a:5,1:9,a^4:17,a:18,a^4:20,a:24,a^4:34,a:40
U 6 5B a^7:3,1:5,a^3:9,a^4:10,1:17,a^6:18
U 6 5B 1:3,1:10,a:24
U 6 5B 1:3,a^17:17,a^17:18,a^17:20,a^17:24
U 6 5B 1:3,a^11:5,a^13:9,1:17,a^11:33,1:48
U 6 5B a^25:5,1:9,a^38:12,a^25:18,a^25:36
U 6 5B a^40:5,a^10:6,a^62:20,a^35:33,a^15:34,a^29:48
U 6 5B a^34:6,a^52:9,a^48:12,a^6:20,a^9:33,a^23:34,a^25:40
U 6 5B 1:9,a^4:10,a^9:12,a^4:18,a^9:20,a^9:40
U 6 5B a^52:3,a^47:5,a:6,a^9:9,a^44:12,a^47:33,a^10:34,a^33:40
U 6 5B a:6,1:9,a:10,a^4:17,a:24,a:33
)";

}  // namespace

std::vector<Vbf> banff_functions() { return parse_function_text(kBanff); }

Vbf kim_mapping() { return parse_function_text("U 6 5B 1:3,1:10,a:24").front(); }

Vbf gold_function(unsigned n, unsigned i) {
  const FieldSpec field = FieldSpec::default_for(n);
  return vbf_from_univariate(UnivariateSpec(field, {UnivariateTerm{1, (std::uint64_t{1} << i) + 1}}));
}

}  // namespace eaforge
