#pragma once

#include "d2lab/errors.hpp"
#include "d2lab/rational.hpp"
#include "d2lab/cyclotomic.hpp"
#include "d2lab/field.hpp"
#include "d2lab/matrix.hpp"
#include "d2lab/sparse.hpp"
#include "d2lab/permutation.hpp"
#include "d2lab/perm_group.hpp"
#include "d2lab/characters.hpp"
#include "d2lab/depth2_characters.hpp"
#include "d2lab/algebra.hpp"
#include "d2lab/depth2_algebra.hpp"
#include "d2lab/frobenius.hpp"
#include "d2lab/io.hpp"
#include "d2lab/report.hpp"
