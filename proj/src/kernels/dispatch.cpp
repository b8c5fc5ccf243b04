#include <cstdlib>
#include <string>

#include "kernel_impl.hpp"

namespace wavewall::kernels {
namespace {

bool avx2_supported() {
#if defined(WAVEWALL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select() {
  const auto tables = available_kernels();
  if (const char* forced = std::getenv("WAVEWALL_KERNELS")) {
    for (const KernelTable* t : tables) {
      if (isa_name(t->isa) == forced) return *t;
    }
  }
  return *tables.back();
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> tables{&scalar_kernels()};
#if defined(WAVEWALL_HAVE_AVX2)
  if (avx2_supported()) tables.push_back(&detail::avx2_kernels());
#endif
#if defined(WAVEWALL_HAVE_NEON)
  tables.push_back(&detail::neon_kernels());
#endif
  return tables;
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace wavewall::kernels
