const config = {
  host: 'db.local',
  password: 'admin123',
};
