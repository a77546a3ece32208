#pragma once

#include "schauder/basis_pair.hpp"
#include "schauder/constants.hpp"
#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"
#include "schauder/harmonic_demo.hpp"
#include "schauder/matrix_io.hpp"
#include "schauder/matrix_kernel.hpp"
#include "schauder/olevskii.hpp"
#include "schauder/riesz.hpp"
#include "schauder/selection.hpp"
#include "schauder/spectrum.hpp"
#include "schauder/transforms.hpp"
#include "schauder/witnesses.hpp"
