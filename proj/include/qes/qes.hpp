#ifndef QES_QES_HPP
#define QES_QES_HPP

#include "ansatz.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "potentials.hpp"
#include "quadrature.hpp"
#include "quantization.hpp"
#include "recurrence.hpp"
#include "wavefunction.hpp"

#endif
