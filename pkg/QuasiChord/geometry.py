# -*- coding: utf-8 -*-
'''Solids and their boundary crossings with lines and rays.

Every body answers batch queries: IntersectLines takes (N, 3) anchors and
(N, 3) unit directions and returns an (N, K) array of sorted crossing
parameters padded with +inf. Consecutive pairs are in-body intervals and a
tangent contact appears as a duplicated value.
'''

import functools
import hashlib
import json
import math

import numpy as np
from scipy.spatial.transform import Rotation

from QuasiChord import errors
from QuasiChord import logger
from QuasiChord import resources
from QuasiChord import sampling


# Relative to the bounding-sphere radius.
TANGENCY_TOLERANCE = 1e-9

BOUNDING_SPHERE_MARGIN = 1e-6

_COMPLEMENT_BOUND = 1e300

_VOLUME_SAMPLES = 1000000
_VOLUME_BATCH = 1 << 18

_OPERATIONS = {
    'union': np.logical_or,
    'intersection': np.logical_and,
    'difference': lambda first, second: first & ~second}


def _AsPoint(value, name='point'):
    try:
        point = np.asarray(value, dtype=np.float64).reshape(3)
    except (TypeError, ValueError):
        raise errors.GeometryError('{0:s} must have three coordinates'.format(name))
    if not np.all(np.isfinite(point)):
        raise errors.GeometryError('{0:s} must be finite'.format(name))
    return point


def _Dot(first, second):
    return np.einsum('ij,ij->i', first, second)


def _CompactCrossings(values, keep):
    '''Moves the kept values of each row to the front, padding with +inf.'''
    counts = keep.sum(axis=1)
    width = max(2, int(counts.max()) if counts.size else 2)
    order = np.argsort(~keep, axis=1, kind='stable')
    compact = np.take_along_axis(values, order, axis=1)[:, :width]
    columns = np.arange(compact.shape[1])
    return np.where(columns[np.newaxis, :] < counts[:, np.newaxis], compact, np.inf)


def CombineCrossings(first, second, operation):
    '''Combines two batches of crossing rows with boolean interval algebra.

    Args:
      first (numpy.ndarray): (N, K1) sorted crossings padded with +inf.
      second (numpy.ndarray): (N, K2) sorted crossings padded with +inf.
      operation (str): union, intersection or difference.

    Returns:
      numpy.ndarray: (N, K) sorted crossings padded with +inf.

    Raises:
      ValueError: if the operation is unsupported.
    '''
    combine = _OPERATIONS.get(operation, None)
    if combine is None:
        raise ValueError('Unsupported operation {0!s}'.format(operation))

    events = np.concatenate((first, second), axis=1)
    finite = np.isfinite(events)
    positions = np.concatenate((
        np.arange(first.shape[1]), np.arange(second.shape[1])))
    from_first = np.concatenate((
        np.ones(first.shape[1], dtype=bool), np.zeros(second.shape[1], dtype=bool)))
    delta = np.where(positions % 2 == 0, 1, -1)[np.newaxis, :] * finite

    # Entries before exits at equal parameters.
    tie = np.where(delta > 0, 0, 1)
    order = np.lexsort((tie, events))
    events = np.take_along_axis(events, order, axis=1)
    delta = np.take_along_axis(delta, order, axis=1)
    from_first = np.take_along_axis(
        np.broadcast_to(from_first, delta.shape), order, axis=1)

    inside_first = np.cumsum(np.where(from_first, delta, 0), axis=1) > 0
    inside_second = np.cumsum(np.where(from_first, 0, delta), axis=1) > 0
    state = combine(inside_first, inside_second)
    previous = np.zeros_like(state)
    previous[:, 1:] = state[:, :-1]
    return _CompactCrossings(events, state != previous)


def ComplementCrossings(crossings):
    '''Returns the crossings of the complement, bounded at +-1e300.'''
    number_of_rows, width = crossings.shape
    counts = np.isfinite(crossings).sum(axis=1)
    complement = np.full((number_of_rows, width + 2), np.inf)
    complement[:, 0] = -_COMPLEMENT_BOUND
    complement[:, 1:width + 1] = crossings
    complement[np.arange(number_of_rows), counts + 1] = _COMPLEMENT_BOUND
    return complement


def SnapCrossings(crossings, tolerance):
    '''Merges consecutive crossings closer than the tolerance into duplicates.'''
    crossings = np.array(crossings, dtype=np.float64)
    with np.errstate(invalid='ignore'):
        for column in range(1, crossings.shape[1]):
            close = (crossings[:, column] - crossings[:, column - 1]) < tolerance
            crossings[close, column] = crossings[close, column - 1]
    return crossings


def EnclosingSphere(first, second):
    '''Returns the smallest sphere containing two spheres.'''
    first_center, first_radius = first
    second_center, second_radius = second
    distance = float(np.linalg.norm(second_center - first_center))
    if distance + second_radius <= first_radius:
        return first_center, first_radius
    if distance + first_radius <= second_radius:
        return second_center, second_radius
    radius = 0.5 * (distance + first_radius + second_radius)
    center = first_center + (second_center - first_center) * (
        (radius - first_radius) / distance)
    return center, radius


def SpheresApart(first, second):
    '''Determines if two spheres are separated by a positive gap.'''
    distance = float(np.linalg.norm(second[0] - first[0]))
    return distance > first[1] + second[1]


class Body(object):
    '''Solid with exact boundary crossings.'''

    _CONVEX = False

    def __init__(self, label=''):
        super(Body, self).__init__()
        self.label = label
        self._volume = None
        self._volume_stderr = 0.0

    def _Intersect(self, anchors, directions):
        '''Returns unsnapped crossings of lines with the body.'''
        raise NotImplementedError()

    def _ComputeVolume(self):
        return _MonteCarloVolume(self)

    def Contains(self, points):
        '''Determines which of the (N, 3) points lie inside the body.'''
        raise NotImplementedError()

    def GetBoundingBox(self):
        '''Returns the (lo, hi) corners of a box containing the body.'''
        raise NotImplementedError()

    def GetBoundingSphere(self):
        '''Returns the (center, radius) of a sphere containing the body.'''
        raise NotImplementedError()

    def GetSurfaceArea(self):
        '''Returns the surface area or None when unavailable.'''
        return None

    def ToDict(self):
        '''Returns the scene-document form of the shape.'''
        raise NotImplementedError()

    def GetDigest(self):
        '''Returns a SHA-256 hex digest of the shape.'''
        document = json.dumps(self.ToDict(), sort_keys=True)
        return hashlib.sha256(document.encode('utf-8')).hexdigest()

    def GetTangencyTolerance(self):
        return TANGENCY_TOLERANCE * self.GetBoundingSphere()[1]

    def GetVolume(self):
        if self._volume is None:
            self._volume, self._volume_stderr = self._ComputeVolume()
        return self._volume

    def GetVolumeStandardError(self):
        self.GetVolume()
        return self._volume_stderr

    def IsConvex(self):
        return self._CONVEX

    def IntersectLines(self, anchors, directions):
        '''Intersects lines with the body.

        Args:
          anchors (numpy.ndarray): (N, 3) points on the lines.
          directions (numpy.ndarray): (N, 3) unit directions.

        Returns:
          numpy.ndarray: (N, K) sorted crossing parameters padded with +inf.
        '''
        anchors = np.atleast_2d(np.asarray(anchors, dtype=np.float64))
        directions = np.atleast_2d(np.asarray(directions, dtype=np.float64))
        crossings = self._Intersect(anchors, directions)
        return SnapCrossings(crossings, self.GetTangencyTolerance())

    def IntersectRays(self, origins, directions):
        '''Intersects rays starting inside the body.

        Returns:
          tuple[numpy.ndarray, numpy.ndarray]: (N, K) positive crossings padded
              with +inf, and a mask of rejected rays whose origin lies on the
              boundary or outside the body.
        '''
        crossings = self.IntersectLines(origins, directions)
        tolerance = self.GetTangencyTolerance()
        rejected = np.any(np.abs(crossings) <= tolerance, axis=1)
        positive = np.sort(np.where(crossings > tolerance, crossings, np.inf), axis=1)
        rejected |= np.isfinite(positive).sum(axis=1) % 2 == 0
        return positive, rejected


class Sphere(Body):
    '''Sphere.'''

    _CONVEX = True

    def __init__(self, center, radius, label=''):
        super(Sphere, self).__init__(label=label)
        if not radius > 0 or not math.isfinite(radius):
            raise errors.GeometryError(
                'Sphere radius must be positive, got {0!s}'.format(radius))
        self.center = _AsPoint(center, 'center')
        self.radius = float(radius)
        self._volume = 4.0 * math.pi * self.radius ** 3 / 3.0

    def _Intersect(self, anchors, directions):
        offsets = anchors - self.center
        projection = _Dot(offsets, directions)
        discriminant = projection * projection - (
            _Dot(offsets, offsets) - self.radius * self.radius)
        hit = discriminant >= -2.0 * self.radius * self.GetTangencyTolerance()
        half_chord = np.sqrt(np.maximum(discriminant[hit], 0.0))

        crossings = np.full((len(anchors), 2), np.inf)
        crossings[hit, 0] = -projection[hit] - half_chord
        crossings[hit, 1] = -projection[hit] + half_chord
        return crossings

    def Contains(self, points):
        offsets = np.atleast_2d(points) - self.center
        return _Dot(offsets, offsets) <= self.radius * self.radius

    def GetBoundingBox(self):
        return self.center - self.radius, self.center + self.radius

    def GetBoundingSphere(self):
        return self.center, self.radius

    def GetSurfaceArea(self):
        return 4.0 * math.pi * self.radius * self.radius

    def ToDict(self):
        return {
            'type': 'sphere', 'center': self.center.tolist(),
            'radius': self.radius}


class Box(Body):
    '''Axis-aligned box.'''

    _CONVEX = True

    def __init__(self, lo, hi, label=''):
        super(Box, self).__init__(label=label)
        self.lo = _AsPoint(lo, 'lo')
        self.hi = _AsPoint(hi, 'hi')
        if np.any(self.hi <= self.lo):
            raise errors.GeometryError(
                'Box corners must satisfy lo < hi, got {0!s} and {1!s}'.format(
                    self.lo.tolist(), self.hi.tolist()))
        self._volume = float(np.prod(self.hi - self.lo))

    def _Intersect(self, anchors, directions):
        with np.errstate(divide='ignore', invalid='ignore'):
            first = (self.lo - anchors) / directions
            second = (self.hi - anchors) / directions
        near = np.minimum(first, second)
        far = np.maximum(first, second)

        parallel = directions == 0.0
        in_slab = (anchors >= self.lo) & (anchors <= self.hi)
        near = np.where(parallel, np.where(in_slab, -np.inf, np.inf), near)
        far = np.where(parallel, np.where(in_slab, np.inf, -np.inf), far)

        entry = near.max(axis=1)
        exit_ = far.min(axis=1)
        hit = (entry <= exit_ + self.GetTangencyTolerance()) & np.isfinite(entry)

        crossings = np.full((len(anchors), 2), np.inf)
        crossings[hit, 0] = entry[hit]
        crossings[hit, 1] = np.maximum(entry[hit], exit_[hit])
        return crossings

    def Contains(self, points):
        points = np.atleast_2d(points)
        return np.all((points >= self.lo) & (points <= self.hi), axis=1)

    def GetBoundingBox(self):
        return self.lo, self.hi

    def GetBoundingSphere(self):
        return 0.5 * (self.lo + self.hi), 0.5 * float(np.linalg.norm(self.hi - self.lo))

    def GetSurfaceArea(self):
        a, b, c = self.hi - self.lo
        return float(2.0 * (a * b + b * c + c * a))

    def ToDict(self):
        return {'type': 'box', 'lo': self.lo.tolist(), 'hi': self.hi.tolist()}


class Cylinder(Body):
    '''Finite circular cylinder between two axis endpoints.'''

    _CONVEX = True

    def __init__(self, start, end, radius, label=''):
        super(Cylinder, self).__init__(label=label)
        self.start = _AsPoint(start, 'start')
        self.end = _AsPoint(end, 'end')
        if not radius > 0 or not math.isfinite(radius):
            raise errors.GeometryError(
                'Cylinder radius must be positive, got {0!s}'.format(radius))
        self.radius = float(radius)
        self.height = float(np.linalg.norm(self.end - self.start))
        if self.height <= 0:
            raise errors.GeometryError('Cylinder axis endpoints coincide')
        self._axis = (self.end - self.start) / self.height
        self._volume = math.pi * self.radius ** 2 * self.height

    def _Intersect(self, anchors, directions):
        tolerance = self.GetTangencyTolerance()
        offsets = anchors - self.start
        along_direction = directions @ self._axis
        along_offset = offsets @ self._axis
        radial_direction = directions - along_direction[:, np.newaxis] * self._axis
        radial_offset = offsets - along_offset[:, np.newaxis] * self._axis

        a = _Dot(radial_direction, radial_direction)
        b = _Dot(radial_offset, radial_direction)
        c = _Dot(radial_offset, radial_offset) - self.radius * self.radius
        discriminant = b * b - a * c

        # Lines parallel to the axis never cross the side wall.
        along_axis = a < 1e-24
        side_hit = np.where(
            along_axis, c <= 2.0 * self.radius * tolerance,
            discriminant >= -2.0 * self.radius * tolerance * a)
        with np.errstate(divide='ignore', invalid='ignore'):
            root = np.sqrt(np.maximum(discriminant, 0.0))
            side_entry = np.where(along_axis, -np.inf, (-b - root) / a)
            side_exit = np.where(along_axis, np.inf, (-b + root) / a)

            first = -along_offset / along_direction
            second = (self.height - along_offset) / along_direction
        cap_entry = np.minimum(first, second)
        cap_exit = np.maximum(first, second)
        across_axis = along_direction == 0.0
        in_slab = (along_offset >= 0.0) & (along_offset <= self.height)
        cap_entry = np.where(across_axis, np.where(in_slab, -np.inf, np.inf), cap_entry)
        cap_exit = np.where(across_axis, np.where(in_slab, np.inf, -np.inf), cap_exit)

        entry = np.maximum(side_entry, cap_entry)
        exit_ = np.minimum(side_exit, cap_exit)
        hit = side_hit & (entry <= exit_ + tolerance) & np.isfinite(entry)

        crossings = np.full((len(anchors), 2), np.inf)
        crossings[hit, 0] = entry[hit]
        crossings[hit, 1] = np.maximum(entry[hit], exit_[hit])
        return crossings

    def Contains(self, points):
        offsets = np.atleast_2d(points) - self.start
        along = offsets @ self._axis
        radial = offsets - along[:, np.newaxis] * self._axis
        return ((along >= 0.0) & (along <= self.height) &
                (_Dot(radial, radial) <= self.radius * self.radius))

    def GetBoundingBox(self):
        extent = self.radius * np.sqrt(np.maximum(1.0 - self._axis ** 2, 0.0))
        return (np.minimum(self.start, self.end) - extent,
                np.maximum(self.start, self.end) + extent)

    def GetBoundingSphere(self):
        return (0.5 * (self.start + self.end),
                math.hypot(0.5 * self.height, self.radius))

    def GetSurfaceArea(self):
        return 2.0 * math.pi * self.radius * (self.height + self.radius)

    def ToDict(self):
        return {
            'type': 'cylinder', 'start': self.start.tolist(),
            'end': self.end.tolist(), 'radius': self.radius}


class _BooleanBody(Body):
    '''Body combining two children with boolean interval algebra.'''

    _OPERATION = None

    def __init__(self, left, right, label=''):
        if not isinstance(left, Body) or not isinstance(right, Body):
            raise errors.GeometryError(
                '{0:s} needs two bodies'.format(self._OPERATION))
        super(_BooleanBody, self).__init__(label=label)
        self.left = left
        self.right = right

    def _ChildrenApart(self):
        return SpheresApart(
            self.left.GetBoundingSphere(), self.right.GetBoundingSphere())

    def _Intersect(self, anchors, directions):
        return CombineCrossings(
            self.left._Intersect(anchors, directions),
            self.right._Intersect(anchors, directions), self._OPERATION)

    def Contains(self, points):
        return _OPERATIONS[self._OPERATION](
            self.left.Contains(points), self.right.Contains(points))

    def ToDict(self):
        return {
            'type': self._OPERATION, 'left': self.left.ToDict(),
            'right': self.right.ToDict()}


class Union(_BooleanBody):
    '''Union of two bodies.'''

    _OPERATION = 'union'

    def _ComputeVolume(self):
        if self._ChildrenApart():
            return (self.left.GetVolume() + self.right.GetVolume(), math.hypot(
                self.left.GetVolumeStandardError(),
                self.right.GetVolumeStandardError()))
        return _MonteCarloVolume(self)

    def GetBoundingBox(self):
        left_lo, left_hi = self.left.GetBoundingBox()
        right_lo, right_hi = self.right.GetBoundingBox()
        return np.minimum(left_lo, right_lo), np.maximum(left_hi, right_hi)

    def GetBoundingSphere(self):
        return EnclosingSphere(
            self.left.GetBoundingSphere(), self.right.GetBoundingSphere())

    def GetSurfaceArea(self):
        if not self._ChildrenApart():
            return None
        left_area = self.left.GetSurfaceArea()
        right_area = self.right.GetSurfaceArea()
        if left_area is None or right_area is None:
            return None
        return left_area + right_area


class Intersection(_BooleanBody):
    '''Intersection of two bodies.'''

    _OPERATION = 'intersection'

    def __init__(self, left, right, label=''):
        super(Intersection, self).__init__(left, right, label=label)
        lo, hi = self.GetBoundingBox()
        if np.any(hi <= lo) or self._ChildrenApart():
            raise errors.GeometryError('Intersection of disjoint bodies is empty')

    def GetBoundingBox(self):
        left_lo, left_hi = self.left.GetBoundingBox()
        right_lo, right_hi = self.right.GetBoundingBox()
        return np.maximum(left_lo, right_lo), np.minimum(left_hi, right_hi)

    def GetBoundingSphere(self):
        left_sphere = self.left.GetBoundingSphere()
        right_sphere = self.right.GetBoundingSphere()
        if left_sphere[1] <= right_sphere[1]:
            return left_sphere
        return right_sphere

    def IsConvex(self):
        return self.left.IsConvex() and self.right.IsConvex()


class Difference(_BooleanBody):
    '''Left body with the right body removed.'''

    _OPERATION = 'difference'

    def _ComputeVolume(self):
        if self._ChildrenApart():
            return self.left.GetVolume(), self.left.GetVolumeStandardError()
        return _MonteCarloVolume(self)

    def GetBoundingBox(self):
        return self.left.GetBoundingBox()

    def GetBoundingSphere(self):
        return self.left.GetBoundingSphere()

    def GetSurfaceArea(self):
        if self._ChildrenApart():
            return self.left.GetSurfaceArea()
        return None

    def IsConvex(self):
        return self._ChildrenApart() and self.left.IsConvex()


class TransformedBody(Body):
    '''Body rotated about its local origin, then translated.'''

    def __init__(self, body, translate=None, axis=None, angle_degrees=0.0, label=''):
        if not isinstance(body, Body):
            raise errors.GeometryError('transform needs a body')
        super(TransformedBody, self).__init__(label=label)
        self.body = body
        self.translate = _AsPoint(
            translate if translate is not None else (0.0, 0.0, 0.0), 'translate')
        self.axis = _AsPoint(axis if axis is not None else (0.0, 0.0, 1.0), 'axis')
        axis_norm = float(np.linalg.norm(self.axis))
        if axis_norm == 0:
            raise errors.GeometryError('Rotation axis must be non-zero')
        self.angle_degrees = float(angle_degrees)
        self._rotation = Rotation.from_rotvec(
            self.axis / axis_norm * math.radians(self.angle_degrees))
        self._matrix = self._rotation.as_matrix()

    def _ToLocal(self, points):
        return (np.atleast_2d(points) - self.translate) @ self._matrix

    def _ToWorld(self, points):
        return np.atleast_2d(points) @ self._matrix.T + self.translate

    def _ComputeVolume(self):
        return self.body.GetVolume(), self.body.GetVolumeStandardError()

    def _Intersect(self, anchors, directions):
        return self.body._Intersect(self._ToLocal(anchors), directions @ self._matrix)

    def Contains(self, points):
        return self.body.Contains(self._ToLocal(points))

    def GetBoundingBox(self):
        lo, hi = self.body.GetBoundingBox()
        corners = np.array([
            [x, y, z] for x in (lo[0], hi[0]) for y in (lo[1], hi[1])
            for z in (lo[2], hi[2])])
        corners = self._ToWorld(corners)
        return corners.min(axis=0), corners.max(axis=0)

    def GetBoundingSphere(self):
        center, radius = self.body.GetBoundingSphere()
        return self._ToWorld(center)[0], radius

    def GetSurfaceArea(self):
        return self.body.GetSurfaceArea()

    def IsConvex(self):
        return self.body.IsConvex()

    def ToDict(self):
        return {
            'type': 'transform', 'translate': self.translate.tolist(),
            'rotate': {
                'axis': self.axis.tolist(), 'angle_degrees': self.angle_degrees},
            'body': self.body.ToDict()}


def _MonteCarloVolume(body, number_of_points=_VOLUME_SAMPLES):
    '''Estimates a volume by containment sampling over the bounding box.

    Returns:
      tuple[float, float]: volume and its standard error.

    Raises:
      DegenerateBodyError: if no sample falls inside the body.
    '''
    lo, hi = body.GetBoundingBox()
    box_volume = float(np.prod(hi - lo))
    rng = sampling.RngStream(int(body.GetDigest()[:15], 16), module='volume')
    inside = 0
    remaining = number_of_points
    while remaining > 0:
        batch = min(remaining, _VOLUME_BATCH)
        points = rng.generator.uniform(lo, hi, (batch, 3))
        inside += int(np.count_nonzero(body.Contains(points)))
        remaining -= batch

    if inside == 0:
        raise errors.DegenerateBodyError(
            'Body {0:s} has zero volume'.format(body.label or body.ToDict()['type']))
    fraction = inside / number_of_points
    volume = box_volume * fraction
    stderr = box_volume * math.sqrt(fraction * (1.0 - fraction) / number_of_points)
    logger.debug('Monte Carlo volume of {0:s}: {1:.6g} +- {2:.2g}'.format(
        body.label or body.ToDict()['type'], volume, stderr))
    return volume, stderr


def IntersectLine(body, line):
    '''Returns the CrossingList of a line with a body.'''
    crossings = body.IntersectLines(
        line.anchor[np.newaxis, :], line.direction[np.newaxis, :])[0]
    return resources.CrossingList(crossings[np.isfinite(crossings)])


def IntersectRay(body, origin, direction):
    '''Returns the odd-length sorted positive crossings of a ray from inside.

    Raises:
      RejectedSampleError: if the origin lies on the boundary or outside.
    '''
    origin = _AsPoint(origin, 'origin')
    direction = resources.AsDirection(direction)
    positive, rejected = body.IntersectRays(
        origin[np.newaxis, :], direction[np.newaxis, :])
    if rejected[0]:
        raise errors.RejectedSampleError(
            'Ray origin {0!s} is not strictly inside the body'.format(origin.tolist()))
    return positive[0][np.isfinite(positive[0])]


def ContainsPoint(body, point):
    return bool(body.Contains(_AsPoint(point)[np.newaxis, :])[0])


def UnionOfBodies(bodies):
    '''Returns the union of one or more bodies.'''
    if not bodies:
        raise errors.GeometryError('No bodies given')
    return functools.reduce(Union, bodies)


def GetSceneBoundingSphere(bodies):
    '''Returns a sphere containing the bounding spheres of all bodies.

    The radius is inflated by a relative margin of 1e-6.
    '''
    center, radius = functools.reduce(
        EnclosingSphere, [body.GetBoundingSphere() for body in bodies])
    return np.array(center, dtype=np.float64), radius * (1.0 + BOUNDING_SPHERE_MARGIN)


def ProbeOverlap(first, second, number_of_points=100000, seed=0):
    '''Estimates the volume shared by two bodies with a containment probe.

    Returns:
      float: shared volume estimate, 0 for separated bounding spheres.
    '''
    if SpheresApart(first.GetBoundingSphere(), second.GetBoundingSphere()):
        return 0.0
    rng = sampling.RngStream(seed, module='overlap')
    points = sampling.SamplePointsInBody(first, rng, number_of_points)
    fraction = float(np.mean(second.Contains(points)))
    return first.GetVolume() * fraction
