#pragma once

#include "segrelab/affine.hpp"
#include "segrelab/automorphism.hpp"
#include "segrelab/complement.hpp"
#include "segrelab/error.hpp"
#include "segrelab/field.hpp"
#include "segrelab/forms.hpp"
#include "segrelab/hyperplanes.hpp"
#include "segrelab/incidence.hpp"
#include "segrelab/io.hpp"
#include "segrelab/matrix.hpp"
#include "segrelab/segre.hpp"
#include "segrelab/spaces.hpp"
#include "segrelab/subspace.hpp"
#include "segrelab/suites.hpp"
