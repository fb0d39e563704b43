// Regenerates resources/fourier_primes.txt.
//   gen_prime_table [k_min k_max per_exponent] > resources/fourier_primes.txt

#include <cstdlib>
#include <iostream>

#include "cvl/params.hpp"

int main(int argc, char** argv) {
  unsigned k_min = 32, k_max = 60;
  std::size_t per = 6;
  if (argc == 4) {
    k_min = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
    k_max = static_cast<unsigned>(std::strtoul(argv[2], nullptr, 10));
    per = std::strtoul(argv[3], nullptr, 10);
  } else if (argc != 1) {
    std::cerr << "usage: gen_prime_table [k_min k_max per_exponent]\n";
    return 2;
  }
  std::cout << cvl::format_prime_table(cvl::generate_prime_table(k_min, k_max, per));
  return 0;
}
